#ifndef SEMQUAD_NETWORK_HPP_
#define SEMQUAD_NETWORK_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "semquad/rng.hpp"
#include "semquad/types.hpp"

namespace semquad {

enum class Activation { kRelu, kTanh };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation activation);

// The embedding function f(.): a feed-forward stack of hidden layers with a
// linear output layer of width d. identity_map skips all layers and forwards
// features unchanged (requires embedding_dim == input_dim, hidden empty); it
// exists so losses can be exercised directly on feature space.
struct NetworkConfig {
  std::size_t input_dim = 0;             // n
  std::vector<std::size_t> hidden;
  std::size_t embedding_dim = 128;       // d
  Activation activation = Activation::kRelu;
  bool normalize_output = false;
  bool classifier_head = false;          // softmax/center baselines only
  std::size_t num_identities = 0;        // head width when classifier_head
  bool identity_map = false;

  void validate() const;
  std::vector<std::size_t> layer_sizes() const;  // [n, hidden..., d]
};

struct NetworkParams {
  std::vector<Eigen::MatrixXd> weights;  // rows = out, cols = in
  std::vector<Eigen::VectorXd> biases;
  Eigen::MatrixXd head_weight;           // num_identities x d when present
  Eigen::VectorXd head_bias;

  std::size_t parameter_count() const;
  bool all_finite() const;
};

// Same shapes as NetworkParams; also used for SGD velocity.
using ParamGradients = NetworkParams;

// Weights ~ N(0, 0.01^2) i.i.d., biases 0.5, deterministic given the seed.
NetworkParams init_params(const NetworkConfig& config, std::uint64_t seed);

ParamGradients zero_like(const NetworkParams& params);

// Per-sample cache of the forward pass, consumed by backward().
struct ForwardTrace {
  std::vector<Eigen::VectorXd> inputs;  // inputs[l] feeds affine layer l; inputs[0] = x
  std::vector<Eigen::VectorXd> pre;     // pre-activation of each affine layer
  Eigen::VectorXd raw_embedding;        // before optional normalization
  Embedding embedding;
  std::vector<double> logits;           // empty unless classifier_head
};

ForwardTrace forward_trace(const NetworkConfig& config, const NetworkParams& params,
                           const std::vector<double>& features);

Embedding forward(const NetworkConfig& config, const NetworkParams& params,
                  const std::vector<double>& features);

// Chain rule from embedding-space (and logit-space) gradients down to every
// parameter; accumulates into `out`. d_logits may be empty when no head.
void accumulate_backward(const NetworkConfig& config, const NetworkParams& params,
                         const ForwardTrace& trace, const std::vector<double>& d_embedding,
                         const std::vector<double>& d_logits, ParamGradients& out);

// Model checkpoint: versioned plain-text record of config + parameters,
// byte-stable for a given value.
void save_model(const std::string& path, const NetworkConfig& config,
                const NetworkParams& params);

struct ModelFile {
  NetworkConfig config;
  NetworkParams params;
};

ModelFile load_model(const std::string& path);

}  // namespace semquad

#endif  // SEMQUAD_NETWORK_HPP_
