#ifndef SEMQUAD_DATA_HPP_
#define SEMQUAD_DATA_HPP_

#include <cstdint>
#include <string>

#include "semquad/types.hpp"

namespace semquad {

Dataset load_dataset(const std::string& path);
void save_dataset(const std::string& path, const Dataset& dataset);

// Synthetic multi-label data: every identity gets a fixed soft-label vector
// and a feature-space centroid; samples are centroid plus Gaussian noise.
// semantic_correlation (rho) blends a label-derived centroid with an
// independent random one: at 1 centroid distances grow with the number of
// disagreeing soft labels, at 0 appearance carries no semantic signal.
struct SyntheticSpec {
  std::size_t identities = 8;
  std::size_t soft_dims = 2;    // label dimensions beyond the identity
  Label soft_cardinality = 2;   // values per soft dimension
  std::size_t samples_per_identity = 5;
  std::size_t feature_dim = 8;
  double noise_sigma = 0.1;
  double semantic_correlation = 1.0;  // rho in [0, 1]
  double spread = 1.0;          // centroid scale
  double identity_sigma = 0.1;  // per-identity offset, separates same-label identities

  void validate() const;
};

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

struct DatasetSplit {
  Dataset train;
  Dataset test;
  std::size_t singleton_identities = 0;  // stratified mode: sent whole to train
};

// Disjoint train/test partition. Stratified mode splits inside each identity
// and keeps at least one training sample per identity; single-sample
// identities go entirely to train and are counted in the result.
DatasetSplit split_dataset(const Dataset& dataset, double train_fraction,
                           bool stratify_by_identity, std::uint64_t seed);

}  // namespace semquad

#endif  // SEMQUAD_DATA_HPP_
