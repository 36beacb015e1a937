#include "semquad/network.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace semquad {

namespace {

constexpr double kInitStddev = 0.01;
constexpr double kInitBias = 0.5;

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double activation_apply(Activation a, double x) {
  return a == Activation::kRelu ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

double activation_derivative(Activation a, double pre) {
  if (a == Activation::kRelu) return pre > 0.0 ? 1.0 : 0.0;
  const double t = std::tanh(pre);
  return 1.0 - t * t;
}

}  // namespace

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw ConfigError("unknown activation '" + name + "' (expected relu or tanh)");
}

std::string to_string(Activation activation) {
  return activation == Activation::kRelu ? "relu" : "tanh";
}

void NetworkConfig::validate() const {
  if (input_dim == 0) throw ConfigError("network input_dim must be >= 1");
  if (embedding_dim == 0) throw ConfigError("network embedding_dim must be >= 1");
  for (std::size_t h : hidden) {
    if (h == 0) throw ConfigError("hidden layer sizes must be >= 1");
  }
  if (identity_map) {
    if (!hidden.empty()) throw ConfigError("identity_map network cannot have hidden layers");
    if (embedding_dim != input_dim) {
      throw ConfigError("identity_map network requires embedding_dim == input_dim");
    }
  }
  if (classifier_head && num_identities == 0) {
    throw ConfigError("classifier_head requires num_identities >= 1");
  }
}

std::vector<std::size_t> NetworkConfig::layer_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.push_back(input_dim);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(embedding_dim);
  return sizes;
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t count = 0;
  for (const auto& w : weights) count += static_cast<std::size_t>(w.size());
  for (const auto& b : biases) count += static_cast<std::size_t>(b.size());
  count += static_cast<std::size_t>(head_weight.size());
  count += static_cast<std::size_t>(head_bias.size());
  return count;
}

bool NetworkParams::all_finite() const {
  const auto finite = [](const auto& m) { return m.allFinite(); };
  for (const auto& w : weights) {
    if (!finite(w)) return false;
  }
  for (const auto& b : biases) {
    if (!finite(b)) return false;
  }
  if (head_weight.size() > 0 && !finite(head_weight)) return false;
  if (head_bias.size() > 0 && !finite(head_bias)) return false;
  return true;
}

NetworkParams init_params(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, kInitStddev);

  NetworkParams params;
  if (!config.identity_map) {
    const auto sizes = config.layer_sizes();
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = gauss(rng);
      }
      params.weights.push_back(std::move(w));
      params.biases.emplace_back(Eigen::VectorXd::Constant(
          static_cast<Eigen::Index>(sizes[l + 1]), kInitBias));
    }
  }
  if (config.classifier_head) {
    params.head_weight.resize(static_cast<Eigen::Index>(config.num_identities),
                              static_cast<Eigen::Index>(config.embedding_dim));
    for (Eigen::Index r = 0; r < params.head_weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < params.head_weight.cols(); ++c) {
        params.head_weight(r, c) = gauss(rng);
      }
    }
    params.head_bias = Eigen::VectorXd::Constant(
        static_cast<Eigen::Index>(config.num_identities), kInitBias);
  }
  return params;
}

ParamGradients zero_like(const NetworkParams& params) {
  ParamGradients out;
  out.weights.reserve(params.weights.size());
  out.biases.reserve(params.biases.size());
  for (const auto& w : params.weights) {
    out.weights.emplace_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : params.biases) {
    out.biases.emplace_back(Eigen::VectorXd::Zero(b.size()));
  }
  if (params.head_weight.size() > 0) {
    out.head_weight = Eigen::MatrixXd::Zero(params.head_weight.rows(),
                                            params.head_weight.cols());
    out.head_bias = Eigen::VectorXd::Zero(params.head_bias.size());
  }
  return out;
}

ForwardTrace forward_trace(const NetworkConfig& config, const NetworkParams& params,
                           const std::vector<double>& features) {
  if (features.size() != config.input_dim) {
    throw DimensionError("forward: got " + std::to_string(features.size()) +
                         " features, network expects " + std::to_string(config.input_dim));
  }
  ForwardTrace trace;
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
      features.data(), static_cast<Eigen::Index>(features.size()));

  const std::size_t layers = params.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    trace.inputs.push_back(x);
    Eigen::VectorXd pre = params.weights[l] * x + params.biases[l];
    trace.pre.push_back(pre);
    if (l + 1 < layers) {
      x = pre.unaryExpr(
          [&](double v) { return activation_apply(config.activation, v); });
    } else {
      x = std::move(pre);
    }
  }

  trace.raw_embedding = x;
  if (config.normalize_output) {
    const double norm = x.norm();
    if (norm > 0.0) x /= norm;
  }
  trace.embedding.assign(x.data(), x.data() + x.size());

  if (config.classifier_head) {
    Eigen::VectorXd logits = params.head_weight * x + params.head_bias;
    trace.logits.assign(logits.data(), logits.data() + logits.size());
  }
  return trace;
}

Embedding forward(const NetworkConfig& config, const NetworkParams& params,
                  const std::vector<double>& features) {
  return forward_trace(config, params, features).embedding;
}

void accumulate_backward(const NetworkConfig& config, const NetworkParams& params,
                         const ForwardTrace& trace, const std::vector<double>& d_embedding,
                         const std::vector<double>& d_logits, ParamGradients& out) {
  if (d_embedding.size() != config.embedding_dim) {
    throw DimensionError("backward: embedding gradient has length " +
                         std::to_string(d_embedding.size()) + ", expected " +
                         std::to_string(config.embedding_dim));
  }
  Eigen::VectorXd g_f = Eigen::Map<const Eigen::VectorXd>(
      d_embedding.data(), static_cast<Eigen::Index>(d_embedding.size()));

  if (!d_logits.empty()) {
    if (!config.classifier_head || d_logits.size() != trace.logits.size()) {
      throw DimensionError("backward: logit gradient shape mismatch");
    }
    const Eigen::VectorXd g_logits = Eigen::Map<const Eigen::VectorXd>(
        d_logits.data(), static_cast<Eigen::Index>(d_logits.size()));
    const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(
        trace.embedding.data(), static_cast<Eigen::Index>(trace.embedding.size()));
    out.head_weight += g_logits * f.transpose();
    out.head_bias += g_logits;
    g_f += params.head_weight.transpose() * g_logits;
  }

  if (config.normalize_output) {
    const double norm = trace.raw_embedding.norm();
    if (norm > 0.0) {
      const Eigen::VectorXd f = trace.raw_embedding / norm;
      g_f = (g_f - f * f.dot(g_f)) / norm;
    }
  }

  const std::size_t layers = params.weights.size();
  Eigen::VectorXd g = std::move(g_f);
  for (std::size_t l = layers; l-- > 0;) {
    if (l + 1 < layers) {
      for (Eigen::Index k = 0; k < g.size(); ++k) {
        g[k] *= activation_derivative(config.activation, trace.pre[l][k]);
      }
    }
    out.weights[l] += g * trace.inputs[l].transpose();
    out.biases[l] += g;
    if (l > 0) g = params.weights[l].transpose() * g;
  }
}

void save_model(const std::string& path, const NetworkConfig& config,
                const NetworkParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file for writing: " + path);

  out << "semquad model v1\n";
  out << "input_dim " << config.input_dim << "\n";
  out << "hidden";
  for (std::size_t h : config.hidden) out << " " << h;
  out << "\n";
  out << "embedding_dim " << config.embedding_dim << "\n";
  out << "activation " << to_string(config.activation) << "\n";
  out << "normalize_output " << (config.normalize_output ? 1 : 0) << "\n";
  out << "classifier_head " << (config.classifier_head ? 1 : 0) << "\n";
  out << "num_identities " << config.num_identities << "\n";
  out << "identity_map " << (config.identity_map ? 1 : 0) << "\n";
  out << "values " << params.parameter_count() << "\n";

  const auto write_matrix = [&](const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out << format_value(m(r, c)) << "\n";
    }
  };
  const auto write_vector = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) out << format_value(v[k]) << "\n";
  };
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    write_matrix(params.weights[l]);
    write_vector(params.biases[l]);
  }
  if (params.head_weight.size() > 0) {
    write_matrix(params.head_weight);
    write_vector(params.head_bias);
  }
  if (!out) throw IoError("failed while writing model file: " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);

  std::string line;
  std::size_t line_no = 0;
  const auto next_line = [&]() {
    if (!std::getline(in, line)) {
      throw ParseError(path + ": unexpected end of file at line " +
                       std::to_string(line_no + 1));
    }
    ++line_no;
    return std::istringstream(line);
  };
  const auto expect_key = [&](std::istringstream& s, const std::string& key) {
    std::string k;
    s >> k;
    if (k != key) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected '" + key +
                       "', found '" + k + "'");
    }
  };

  {
    auto s = next_line();
    if (line != "semquad model v1") {
      throw ParseError(path + ":1: not a semquad model file (bad magic line)");
    }
  }

  ModelFile model;
  NetworkConfig& config = model.config;
  {
    auto s = next_line();
    expect_key(s, "input_dim");
    s >> config.input_dim;
  }
  {
    auto s = next_line();
    expect_key(s, "hidden");
    std::size_t h;
    while (s >> h) config.hidden.push_back(h);
  }
  {
    auto s = next_line();
    expect_key(s, "embedding_dim");
    s >> config.embedding_dim;
  }
  {
    auto s = next_line();
    expect_key(s, "activation");
    std::string name;
    s >> name;
    config.activation = activation_from_string(name);
  }
  const auto read_flag = [&](const std::string& key) {
    auto s = next_line();
    expect_key(s, key);
    int v = 0;
    s >> v;
    return v != 0;
  };
  config.normalize_output = read_flag("normalize_output");
  config.classifier_head = read_flag("classifier_head");
  {
    auto s = next_line();
    expect_key(s, "num_identities");
    s >> config.num_identities;
  }
  config.identity_map = read_flag("identity_map");
  config.validate();

  std::size_t declared = 0;
  {
    auto s = next_line();
    expect_key(s, "values");
    s >> declared;
  }

  NetworkParams& params = model.params;
  const auto read_value = [&]() {
    auto s = next_line();
    double v;
    if (!(s >> v)) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected a number");
    }
    return v;
  };
  if (!config.identity_map) {
    const auto sizes = config.layer_sizes();
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = read_value();
      }
      Eigen::VectorXd b(static_cast<Eigen::Index>(sizes[l + 1]));
      for (Eigen::Index k = 0; k < b.size(); ++k) b[k] = read_value();
      params.weights.push_back(std::move(w));
      params.biases.push_back(std::move(b));
    }
  }
  if (config.classifier_head) {
    params.head_weight.resize(static_cast<Eigen::Index>(config.num_identities),
                              static_cast<Eigen::Index>(config.embedding_dim));
    for (Eigen::Index r = 0; r < params.head_weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < params.head_weight.cols(); ++c) {
        params.head_weight(r, c) = read_value();
      }
    }
    params.head_bias.resize(static_cast<Eigen::Index>(config.num_identities));
    for (Eigen::Index k = 0; k < params.head_bias.size(); ++k) {
      params.head_bias[k] = read_value();
    }
  }
  if (params.parameter_count() != declared) {
    throw ParseError(path + ": declared " + std::to_string(declared) +
                     " values, layout requires " +
                     std::to_string(params.parameter_count()));
  }
  if (!params.all_finite()) throw ParseError(path + ": non-finite parameter value");
  return model;
}

}  // namespace semquad
