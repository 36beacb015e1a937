#ifndef SEMQUAD_TRAIN_HPP_
#define SEMQUAD_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "semquad/network.hpp"
#include "semquad/types.hpp"

namespace semquad {

enum class LossKind { kQuadruplet, kTriplet, kCenter, kSoftmax };

LossKind loss_from_string(const std::string& name);
std::string to_string(LossKind kind);

struct TrainConfig {
  LossKind loss = LossKind::kQuadruplet;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  std::size_t batch_size = 64;      // b samples drawn per iteration
  std::size_t minibatch_size = 64;  // s learning instances kept per iteration
  std::size_t patience = 10;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 1;
  double margin = 0.1;  // alpha
  double validation_fraction = 0.1;
  std::size_t iters_per_epoch = 0;  // 0 selects floor(n_train / s), at least 1
  bool semi_hard = false;           // triplet negatives from the margin band
  double center_lambda = 0.003;
  double center_learning_rate = 0.5;
  std::size_t lr_step_epochs = 0;  // 0 keeps the learning rate constant
  double lr_step_factor = 0.1;

  void validate() const;
};

// Classical momentum with the decay term folded into the gradient:
//   v <- momentum * v - lr * (g + decay * w);  w <- w + v
// `velocity` must be shaped like `params` (start from zero_like).
void sgd_step(NetworkParams& params, const ParamGradients& grads,
              ParamGradients& velocity, double learning_rate, double momentum,
              double weight_decay);

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  NetworkConfig network;  // effective config (a classifier head may be added)
  NetworkParams params;   // snapshot from the best validation epoch
  std::vector<EpochStats> history;
  std::size_t best_epoch = 0;  // 1-based
  double best_val_loss = 0.0;
};

// Runs the epoch loop: per iteration draw a batch of b samples, mine up to s
// learning instances, backpropagate their mean loss, and apply one SGD step.
// Validation loss is measured each epoch on a stratified held-out fraction
// with a fixed instance set; training stops once it has not improved for
// `patience` epochs (or at max_epochs) and the best-epoch weights are
// returned. Throws DegenerateDataError when an entire epoch mines nothing.
// A non-null `resume` continues from those weights instead of fresh ones.
TrainResult train(const Dataset& dataset, const NetworkConfig& network,
                  const TrainConfig& config, const NetworkParams* resume = nullptr);

}  // namespace semquad

#endif  // SEMQUAD_TRAIN_HPP_
