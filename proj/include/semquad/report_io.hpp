#ifndef SEMQUAD_REPORT_IO_HPP_
#define SEMQUAD_REPORT_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "semquad/eval.hpp"
#include "semquad/train.hpp"
#include "semquad/types.hpp"

namespace semquad {

struct EmbeddingTable {
  std::vector<std::uint64_t> ids;
  std::vector<Embedding> values;  // one row per id

  std::size_t size() const { return ids.size(); }
  std::size_t dim() const { return values.empty() ? 0 : values.front().size(); }
  void validate() const;
};

// CSV with header "id,e0,...,e{d-1}".
void save_embeddings(const std::string& path, const EmbeddingTable& table);
EmbeddingTable load_embeddings(const std::string& path);

// CSV with header "epoch,train_loss,val_loss".
void save_history(const std::string& path, const std::vector<EpochStats>& history);

struct Curve {
  std::string x_name;
  std::string y_name;
  std::vector<CurvePoint> points;
};

void save_curve(const std::string& path, const Curve& curve);
Curve load_curve(const std::string& path);

// The scalars.txt body: key=value lines covering scores and bootstrap stats.
std::string format_scalars(const EvalReport& report);

// Writes roc.csv, cmc.csv, hit_penetration.csv, scalars.txt and, when the
// report carries them, dir.csv and hit_penetration_baseline.csv.
void write_report(const std::string& dir, const EvalReport& report);

}  // namespace semquad

#endif  // SEMQUAD_REPORT_IO_HPP_
