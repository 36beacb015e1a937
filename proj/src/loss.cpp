#include "semquad/loss.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "semquad/metric.hpp"

namespace semquad {

namespace {

const Embedding& at(const std::vector<Embedding>& embeddings, std::size_t idx) {
  if (idx >= embeddings.size()) {
    throw DimensionError("quadruplet index " + std::to_string(idx) +
                         " out of range for " + std::to_string(embeddings.size()) +
                         " embeddings");
  }
  return embeddings[idx];
}

int sign(long long v) { return (v > 0) - (v < 0); }

}  // namespace

QuadrupletInstance canonicalize(const QuadrupletInstance& quad) {
  if (quad.phi_ij == quad.phi_pq) {
    throw ConfigError("cannot canonicalize a quadruplet with equal pair dissimilarities");
  }
  QuadrupletInstance out = quad;
  if (out.phi_ij < out.phi_pq) {
    std::swap(out.i, out.p);
    std::swap(out.j, out.q);
    std::swap(out.phi_ij, out.phi_pq);
  }
  if (out.i > out.j) std::swap(out.i, out.j);
  if (out.p > out.q) std::swap(out.p, out.q);
  return out;
}

long long delta_phi(const QuadrupletInstance& quad) {
  return static_cast<long long>(quad.phi_ij) - static_cast<long long>(quad.phi_pq);
}

double delta_f(const Embedding& f_i, const Embedding& f_j, const Embedding& f_p,
               const Embedding& f_q, double alpha) {
  return squared_distance(f_p, f_q) - squared_distance(f_i, f_j) + alpha;
}

double quadruplet_term(const QuadrupletInstance& quad,
                       const std::vector<Embedding>& embeddings, double alpha) {
  const int sgn = sign(delta_phi(quad));
  if (sgn == 0) return 0.0;
  const Embedding& f_i = at(embeddings, quad.i);
  const Embedding& f_j = at(embeddings, quad.j);
  const Embedding& f_p = at(embeddings, quad.p);
  const Embedding& f_q = at(embeddings, quad.q);
  const double bracket =
      (squared_distance(f_p, f_q) - squared_distance(f_i, f_j)) + alpha;
  return sgn * bracket;
}

BatchLossResult batch_loss(const std::vector<QuadrupletInstance>& instances,
                           const std::vector<Embedding>& embeddings,
                           const LossConfig& config) {
  BatchLossResult result;
  if (instances.empty()) {
    result.empty_minibatch = true;
    return result;
  }
  double sum = 0.0;
  for (const QuadrupletInstance& quad : instances) {
    sum += std::max(quadruplet_term(quad, embeddings, config.margin), 0.0);
  }
  result.value = sum / static_cast<double>(instances.size());
  return result;
}

QuadrupletGradients quadruplet_gradients(const QuadrupletInstance& quad,
                                         const std::vector<Embedding>& embeddings,
                                         double alpha) {
  const Embedding& f_i = at(embeddings, quad.i);
  const Embedding& f_j = at(embeddings, quad.j);
  const Embedding& f_p = at(embeddings, quad.p);
  const Embedding& f_q = at(embeddings, quad.q);

  const std::size_t d = f_i.size();
  QuadrupletGradients grads;
  grads.d_i.assign(d, 0.0);
  grads.d_j.assign(d, 0.0);
  grads.d_p.assign(d, 0.0);
  grads.d_q.assign(d, 0.0);

  // The gate uses delta_f >= 0, so the subgradient 2(.) applies at the kink.
  if (delta_phi(quad) <= 0) return grads;
  if (delta_f(f_i, f_j, f_p, f_q, alpha) < 0.0) return grads;

  grads.active = true;
  for (std::size_t k = 0; k < d; ++k) {
    grads.d_i[k] = 2.0 * (f_j[k] - f_i[k]);
    grads.d_j[k] = 2.0 * (f_i[k] - f_j[k]);
    grads.d_p[k] = 2.0 * (f_p[k] - f_q[k]);
    grads.d_q[k] = 2.0 * (f_q[k] - f_p[k]);
  }
  return grads;
}

std::vector<Embedding> batch_loss_gradients(
    const std::vector<QuadrupletInstance>& instances,
    const std::vector<Embedding>& embeddings, const LossConfig& config) {
  const std::size_t d = embeddings.empty() ? 0 : embeddings.front().size();
  std::vector<Embedding> grads(embeddings.size(), Embedding(d, 0.0));
  if (instances.empty()) return grads;

  const double scale = 1.0 / static_cast<double>(instances.size());
  for (const QuadrupletInstance& quad : instances) {
    const QuadrupletGradients g = quadruplet_gradients(quad, embeddings, config.margin);
    if (!g.active) continue;
    for (std::size_t k = 0; k < d; ++k) {
      grads[quad.i][k] += scale * g.d_i[k];
      grads[quad.j][k] += scale * g.d_j[k];
      grads[quad.p][k] += scale * g.d_p[k];
      grads[quad.q][k] += scale * g.d_q[k];
    }
  }
  return grads;
}

TripletResult triplet_loss(const Embedding& anchor, const Embedding& positive,
                           const Embedding& negative, double alpha) {
  const double bracket =
      squared_distance(anchor, positive) - squared_distance(anchor, negative) + alpha;

  const std::size_t d = anchor.size();
  TripletResult result;
  result.loss = std::max(bracket, 0.0);
  result.d_anchor.assign(d, 0.0);
  result.d_positive.assign(d, 0.0);
  result.d_negative.assign(d, 0.0);
  if (bracket < 0.0) return result;

  for (std::size_t k = 0; k < d; ++k) {
    result.d_anchor[k] = 2.0 * (negative[k] - positive[k]);
    result.d_positive[k] = 2.0 * (positive[k] - anchor[k]);
    result.d_negative[k] = 2.0 * (anchor[k] - negative[k]);
  }
  return result;
}

CenterLossResult center_loss(const std::vector<Embedding>& embeddings,
                             const std::vector<Label>& identity_labels,
                             const std::vector<Embedding>& centers, double lambda) {
  if (embeddings.size() != identity_labels.size()) {
    throw DimensionError("center_loss: embedding / label count mismatch");
  }
  const std::size_t m = embeddings.size();
  const std::size_t d = centers.empty() ? 0 : centers.front().size();

  CenterLossResult result;
  result.d_embeddings.assign(m, Embedding(d, 0.0));
  result.center_deltas.assign(centers.size(), Embedding(d, 0.0));
  if (m == 0) return result;

  std::vector<std::size_t> member_count(centers.size(), 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Label y = identity_labels[i];
    if (y >= centers.size()) {
      throw ConfigError("center_loss: identity " + std::to_string(y) +
                        " has no center (have " + std::to_string(centers.size()) + ")");
    }
    sum += squared_distance(embeddings[i], centers[y]);
    ++member_count[y];
    for (std::size_t k = 0; k < d; ++k) {
      result.d_embeddings[i][k] =
          lambda / static_cast<double>(m) * (embeddings[i][k] - centers[y][k]);
      result.center_deltas[y][k] += centers[y][k] - embeddings[i][k];
    }
  }
  result.loss = 0.5 * lambda * sum / static_cast<double>(m);

  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double denom = 1.0 + static_cast<double>(member_count[c]);
    for (std::size_t k = 0; k < d; ++k) result.center_deltas[c][k] /= denom;
  }
  return result;
}

SoftmaxResult softmax_loss(const std::vector<double>& logits, Label identity) {
  if (identity >= logits.size()) {
    throw ConfigError("softmax_loss: label " + std::to_string(identity) +
                      " out of range for " + std::to_string(logits.size()) + " logits");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (double v : logits) denom += std::exp(v - max_logit);

  SoftmaxResult result;
  result.loss = std::log(denom) - (logits[identity] - max_logit);
  result.d_logits.resize(logits.size());
  for (std::size_t c = 0; c < logits.size(); ++c) {
    const double p = std::exp(logits[c] - max_logit) / denom;
    result.d_logits[c] = p - (c == identity ? 1.0 : 0.0);
  }
  return result;
}

}  // namespace semquad
