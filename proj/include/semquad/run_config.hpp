#ifndef SEMQUAD_RUN_CONFIG_HPP_
#define SEMQUAD_RUN_CONFIG_HPP_

#include <cstdint>

#include "semquad/config.hpp"
#include "semquad/data.hpp"
#include "semquad/eval.hpp"
#include "semquad/network.hpp"
#include "semquad/train.hpp"

namespace semquad {

// Mappings from flat key=value configs to the typed module configs. Every
// parser consumes its keys and calls finish(), so unrecognized keys are
// rejected before any work starts.

struct GenSetup {
  SyntheticSpec spec;
  std::uint64_t seed = 1;
};
GenSetup parse_gen_config(KeyValueConfig config);

struct TrainSetup {
  NetworkConfig network;
  TrainConfig train;
};
TrainSetup parse_train_config(KeyValueConfig config);

struct EvalSetup {
  SplitSpec split;
  ReportConfig report;
};
EvalSetup parse_eval_config(KeyValueConfig config);

}  // namespace semquad

#endif  // SEMQUAD_RUN_CONFIG_HPP_
