#include "semquad/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "semquad/loss.hpp"
#include "semquad/mining.hpp"
#include "semquad/rng.hpp"

namespace semquad {

namespace {

bool all_zero(const Embedding& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
};

// Shuffles each identity's samples and holds out `fraction` of them, always
// leaving at least one training sample per identity.
SplitIndices stratified_split(const Dataset& dataset, double fraction, Rng& rng) {
  std::map<Label, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    groups[dataset.samples[k].labels[0]].push_back(k);
  }

  SplitIndices split;
  for (auto& [identity, members] : groups) {
    std::shuffle(members.begin(), members.end(), rng);
    std::size_t n_val = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(members.size())));
    if (n_val >= members.size()) n_val = members.size() - 1;
    for (std::size_t k = 0; k < members.size(); ++k) {
      (k < n_val ? split.val : split.train).push_back(members[k]);
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  return split;
}

struct BatchData {
  std::vector<LabelVector> labels;
  std::vector<Label> identities;
  std::vector<ForwardTrace> traces;
  std::vector<Embedding> embeddings;
};

BatchData draw_batch(const Dataset& dataset, const std::vector<std::size_t>& pool,
                     std::size_t b, const NetworkConfig& net,
                     const NetworkParams& params, Rng& rng) {
  const Batch batch = sample_batch(pool.size(), std::min(b, pool.size()), rng);
  BatchData data;
  data.labels.reserve(batch.size());
  data.identities.reserve(batch.size());
  data.traces.reserve(batch.size());
  data.embeddings.reserve(batch.size());
  for (std::size_t pos : batch.sample_indices) {
    const Sample& sample = dataset.samples[pool[pos]];
    data.labels.push_back(sample.labels);
    data.identities.push_back(sample.labels[0]);
    data.traces.push_back(forward_trace(net, params, sample.features));
    data.embeddings.push_back(data.traces.back().embedding);
  }
  return data;
}

std::vector<Embedding> embed_subset(const Dataset& dataset,
                                    const std::vector<std::size_t>& indices,
                                    const NetworkConfig& net,
                                    const NetworkParams& params) {
  std::vector<Embedding> out;
  out.reserve(indices.size());
  for (std::size_t k : indices) {
    out.push_back(forward(net, params, dataset.samples[k].features));
  }
  return out;
}

}  // namespace

LossKind loss_from_string(const std::string& name) {
  if (name == "quadruplet") return LossKind::kQuadruplet;
  if (name == "triplet") return LossKind::kTriplet;
  if (name == "center") return LossKind::kCenter;
  if (name == "softmax") return LossKind::kSoftmax;
  throw ConfigError("unknown loss '" + name +
                    "' (expected quadruplet, triplet, center or softmax)");
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kQuadruplet: return "quadruplet";
    case LossKind::kTriplet: return "triplet";
    case LossKind::kCenter: return "center";
    case LossKind::kSoftmax: return "softmax";
  }
  throw ConfigError("unknown loss kind");
}

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must lie in [0, 1)");
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be non-negative");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (minibatch_size == 0) throw ConfigError("minibatch_size must be >= 1");
  if (patience == 0) throw ConfigError("patience must be >= 1");
  if (max_epochs == 0) throw ConfigError("max_epochs must be >= 1");
  if (margin < 0.0) throw ConfigError("margin must be non-negative");
  if (validation_fraction <= 0.0 || validation_fraction >= 1.0) {
    throw ConfigError("validation_fraction must lie in (0, 1)");
  }
  if (center_lambda < 0.0) throw ConfigError("center_lambda must be non-negative");
  if (center_learning_rate <= 0.0) {
    throw ConfigError("center_learning_rate must be positive");
  }
  if (lr_step_epochs > 0 && (lr_step_factor <= 0.0 || lr_step_factor > 1.0)) {
    throw ConfigError("lr_step_factor must lie in (0, 1]");
  }
}

void sgd_step(NetworkParams& params, const ParamGradients& grads,
              ParamGradients& velocity, double learning_rate, double momentum,
              double weight_decay) {
  if (grads.weights.size() != params.weights.size() ||
      velocity.weights.size() != params.weights.size()) {
    throw DimensionError("sgd_step: gradient / velocity layer count mismatch");
  }
  const auto update = [&](auto& w, const auto& g, auto& v) {
    v = momentum * v - learning_rate * (g + weight_decay * w);
    w += v;
  };
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    update(params.weights[l], grads.weights[l], velocity.weights[l]);
    update(params.biases[l], grads.biases[l], velocity.biases[l]);
  }
  if (params.head_weight.size() > 0) {
    update(params.head_weight, grads.head_weight, velocity.head_weight);
    update(params.head_bias, grads.head_bias, velocity.head_bias);
  }
}

TrainResult train(const Dataset& dataset, const NetworkConfig& network,
                  const TrainConfig& config, const NetworkParams* resume) {
  config.validate();
  dataset.validate();
  if (dataset.size() < 2) {
    throw DegenerateDataError("training needs at least 2 samples, got " +
                              std::to_string(dataset.size()));
  }

  NetworkConfig net = network;
  if (net.input_dim == 0) net.input_dim = dataset.header.feature_dim;
  if (net.input_dim != dataset.header.feature_dim) {
    throw DimensionError("network expects " + std::to_string(net.input_dim) +
                         " features, dataset provides " +
                         std::to_string(dataset.header.feature_dim));
  }
  const bool needs_head =
      config.loss == LossKind::kSoftmax || config.loss == LossKind::kCenter;
  if (needs_head) {
    net.classifier_head = true;
    const std::size_t identities = dataset.header.cardinalities[0];
    if (net.num_identities < identities) net.num_identities = identities;
  }
  net.validate();

  NetworkParams params = init_params(net, derive_seed(config.seed, "init"));
  if (resume != nullptr) {
    if (resume->weights.size() != params.weights.size()) {
      throw DimensionError("resume checkpoint has a different layer count");
    }
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
      if (resume->weights[l].rows() != params.weights[l].rows() ||
          resume->weights[l].cols() != params.weights[l].cols()) {
        throw DimensionError("resume checkpoint layer " + std::to_string(l) +
                             " has a different shape");
      }
      params.weights[l] = resume->weights[l];
      params.biases[l] = resume->biases[l];
    }
    if (resume->head_weight.size() > 0) {
      if (resume->head_weight.rows() != params.head_weight.rows() ||
          resume->head_weight.cols() != params.head_weight.cols()) {
        throw DimensionError("resume checkpoint classifier head has a different shape");
      }
      params.head_weight = resume->head_weight;
      params.head_bias = resume->head_bias;
    }
  }
  ParamGradients velocity = zero_like(params);

  Rng split_rng(derive_seed(config.seed, "split"));
  const SplitIndices split =
      stratified_split(dataset, config.validation_fraction, split_rng);
  const std::size_t n_train = split.train.size();

  // Validation instances are fixed up front so the early-stopping signal is
  // comparable across epochs.
  Rng val_rng(derive_seed(config.seed, "validation"));
  std::vector<LabelVector> val_labels;
  std::vector<Label> val_identities;
  for (std::size_t k : split.val) {
    val_labels.push_back(dataset.samples[k].labels);
    val_identities.push_back(dataset.samples[k].labels[0]);
  }
  std::vector<QuadrupletInstance> val_quads;
  std::vector<TripletIndices> val_triplets;
  if (config.loss == LossKind::kQuadruplet && split.val.size() >= 4) {
    Batch val_batch;
    val_batch.sample_indices.resize(split.val.size());
    std::iota(val_batch.sample_indices.begin(), val_batch.sample_indices.end(), 0);
    val_quads = sample_minibatch(val_batch, val_labels, config.minibatch_size,
                                 val_rng)
                    .instances;
  } else if (config.loss == LossKind::kTriplet && split.val.size() >= 3) {
    val_triplets = sample_triplets(val_labels, nullptr, config.minibatch_size,
                                   config.margin, false, val_rng);
  }

  std::vector<Embedding> centers;
  if (config.loss == LossKind::kCenter) {
    centers.assign(net.num_identities, Embedding(net.embedding_dim, 0.0));
  }
  const LossConfig loss_config{config.margin, config.minibatch_size};

  const auto validation_loss = [&]() -> double {
    switch (config.loss) {
      case LossKind::kQuadruplet: {
        if (val_quads.empty()) return std::numeric_limits<double>::quiet_NaN();
        const auto embeddings = embed_subset(dataset, split.val, net, params);
        return batch_loss(val_quads, embeddings, loss_config).value;
      }
      case LossKind::kTriplet: {
        if (val_triplets.empty()) return std::numeric_limits<double>::quiet_NaN();
        const auto embeddings = embed_subset(dataset, split.val, net, params);
        double sum = 0.0;
        for (const auto& t : val_triplets) {
          sum += triplet_loss(embeddings[t.anchor], embeddings[t.positive],
                              embeddings[t.negative], config.margin)
                     .loss;
        }
        return sum / static_cast<double>(val_triplets.size());
      }
      case LossKind::kSoftmax:
      case LossKind::kCenter: {
        if (split.val.empty()) return std::numeric_limits<double>::quiet_NaN();
        double sum = 0.0;
        std::vector<Embedding> embeddings;
        embeddings.reserve(split.val.size());
        for (std::size_t k : split.val) {
          const auto trace = forward_trace(net, params, dataset.samples[k].features);
          sum += softmax_loss(trace.logits, dataset.samples[k].labels[0]).loss;
          embeddings.push_back(trace.embedding);
        }
        double value = sum / static_cast<double>(split.val.size());
        if (config.loss == LossKind::kCenter) {
          value += center_loss(embeddings, val_identities, centers,
                               config.center_lambda)
                       .loss;
        }
        return value;
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  Rng mining_rng(derive_seed(config.seed, "mining"));
  const std::size_t iters =
      config.iters_per_epoch > 0
          ? config.iters_per_epoch
          : std::max<std::size_t>(1, n_train / config.minibatch_size);

  TrainResult result;
  NetworkParams best_params = params;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double lr = config.learning_rate;
    if (config.lr_step_epochs > 0) {
      lr *= std::pow(config.lr_step_factor,
                     static_cast<double>((epoch - 1) / config.lr_step_epochs));
    }

    double loss_sum = 0.0;
    std::size_t mined_iters = 0;
    for (std::size_t it = 0; it < iters; ++it) {
      BatchData batch = draw_batch(dataset, split.train, config.batch_size, net,
                                   params, mining_rng);
      ParamGradients grads = zero_like(params);
      double iter_loss = 0.0;
      bool mined = false;

      switch (config.loss) {
        case LossKind::kQuadruplet: {
          Batch positions;
          positions.sample_indices.resize(batch.labels.size());
          std::iota(positions.sample_indices.begin(), positions.sample_indices.end(),
                    0);
          const MiniBatch mini = sample_minibatch(
              positions, batch.labels, config.minibatch_size, mining_rng);
          if (mini.degenerate) break;
          mined = true;
          iter_loss = batch_loss(mini.instances, batch.embeddings, loss_config).value;
          const auto d_embeddings =
              batch_loss_gradients(mini.instances, batch.embeddings, loss_config);
          for (std::size_t k = 0; k < batch.traces.size(); ++k) {
            if (all_zero(d_embeddings[k])) continue;
            accumulate_backward(net, params, batch.traces[k], d_embeddings[k], {},
                                grads);
          }
          break;
        }
        case LossKind::kTriplet: {
          const auto triplets = sample_triplets(
              batch.labels, &batch.embeddings, config.minibatch_size,
              config.margin, config.semi_hard, mining_rng);
          if (triplets.empty()) break;
          mined = true;
          const double scale = 1.0 / static_cast<double>(triplets.size());
          std::vector<Embedding> d_embeddings(batch.embeddings.size(),
                                              Embedding(net.embedding_dim, 0.0));
          for (const auto& t : triplets) {
            const TripletResult r =
                triplet_loss(batch.embeddings[t.anchor], batch.embeddings[t.positive],
                             batch.embeddings[t.negative], config.margin);
            iter_loss += scale * r.loss;
            for (std::size_t k = 0; k < net.embedding_dim; ++k) {
              d_embeddings[t.anchor][k] += scale * r.d_anchor[k];
              d_embeddings[t.positive][k] += scale * r.d_positive[k];
              d_embeddings[t.negative][k] += scale * r.d_negative[k];
            }
          }
          for (std::size_t k = 0; k < batch.traces.size(); ++k) {
            if (all_zero(d_embeddings[k])) continue;
            accumulate_backward(net, params, batch.traces[k], d_embeddings[k], {},
                                grads);
          }
          break;
        }
        case LossKind::kSoftmax:
        case LossKind::kCenter: {
          mined = true;
          const double scale = 1.0 / static_cast<double>(batch.traces.size());
          CenterLossResult center;
          if (config.loss == LossKind::kCenter) {
            center = center_loss(batch.embeddings, batch.identities, centers,
                                 config.center_lambda);
            iter_loss += center.loss;
          }
          const Embedding zero_d(net.embedding_dim, 0.0);
          for (std::size_t k = 0; k < batch.traces.size(); ++k) {
            SoftmaxResult sm =
                softmax_loss(batch.traces[k].logits, batch.identities[k]);
            iter_loss += scale * sm.loss;
            for (double& g : sm.d_logits) g *= scale;
            const Embedding& d_embedding =
                config.loss == LossKind::kCenter ? center.d_embeddings[k] : zero_d;
            accumulate_backward(net, params, batch.traces[k], d_embedding,
                                sm.d_logits, grads);
          }
          if (config.loss == LossKind::kCenter) {
            for (std::size_t c = 0; c < centers.size(); ++c) {
              for (std::size_t k = 0; k < net.embedding_dim; ++k) {
                centers[c][k] -=
                    config.center_learning_rate * center.center_deltas[c][k];
              }
            }
          }
          break;
        }
      }

      if (!mined) continue;
      ++mined_iters;
      loss_sum += iter_loss;
      sgd_step(params, grads, velocity, lr, config.momentum, config.weight_decay);
    }

    if (mined_iters == 0) {
      throw DegenerateDataError(
          "epoch " + std::to_string(epoch) +
          ": no mini-batch produced a single valid learning instance; the "
          "training labels cannot support the selected loss");
    }

    const double train_loss = loss_sum / static_cast<double>(mined_iters);
    double val_loss = validation_loss();
    if (std::isnan(val_loss)) val_loss = train_loss;
    result.history.push_back(EpochStats{epoch, train_loss, val_loss});

    if (val_loss < best_val) {
      best_val = val_loss;
      best_epoch = epoch;
      best_params = params;
      since_best = 0;
    } else {
      ++since_best;
      if (since_best >= config.patience) break;
    }
  }

  result.network = net;
  result.params = std::move(best_params);
  result.best_epoch = best_epoch;
  result.best_val_loss = best_val;
  return result;
}

}  // namespace semquad
