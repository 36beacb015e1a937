#ifndef SEMQUAD_LOSS_HPP_
#define SEMQUAD_LOSS_HPP_

#include <cstddef>
#include <vector>

#include "semquad/types.hpp"

namespace semquad {

// Two disjoint index pairs (i,j) and (p,q) drawn from a mini-batch, with the
// label-disagreement count of each pair cached at mining time. Canonical
// instances have phi_ij > phi_pq, i.e. (i,j) is the less similar pair.
struct QuadrupletInstance {
  std::size_t i = 0, j = 0, p = 0, q = 0;
  std::size_t phi_ij = 0, phi_pq = 0;

  bool canonical() const { return phi_ij > phi_pq; }
};

// Reorders the two pairs (and sorts indices inside each pair) so that the less
// similar pair occupies (i,j). Throws ConfigError when phi_ij == phi_pq, since
// such instances carry no learning signal.
QuadrupletInstance canonicalize(const QuadrupletInstance& quad);

struct LossConfig {
  double margin = 0.1;        // alpha
  std::size_t minibatch = 64; // s
};

// phi_ij - phi_pq; strictly positive for canonical instances.
long long delta_phi(const QuadrupletInstance& quad);

// |f_p - f_q|^2 - |f_i - f_j|^2 + alpha. Non-negative values mean the margin
// is violated and the instance contributes gradient.
double delta_f(const Embedding& f_i, const Embedding& f_j, const Embedding& f_p,
               const Embedding& f_q, double alpha);

// The signed per-quadruplet term: sgn(phi_ij - phi_pq) * [(|f_p - f_q|^2 -
// |f_i - f_j|^2) + alpha]. Exactly zero when both pairs disagree on the same
// number of labels.
double quadruplet_term(const QuadrupletInstance& quad,
                       const std::vector<Embedding>& embeddings, double alpha);

struct BatchLossResult {
  double value = 0.0;
  bool empty_minibatch = false;  // no instances were supplied
};

// Truncated mean over the mini-batch: (1/s) * sum max(term, 0). Instances are
// expected canonical (the mining stage guarantees it). An empty instance list
// yields 0 with the warning flag set.
BatchLossResult batch_loss(const std::vector<QuadrupletInstance>& instances,
                           const std::vector<Embedding>& embeddings,
                           const LossConfig& config);

struct QuadrupletGradients {
  Embedding d_i, d_j, d_p, d_q;
  bool active = false;  // delta_phi > 0 and delta_f >= 0
};

// Per-element gradients of the hinge term max(term, 0) for a canonical
// instance. All four vectors are zero when the hinge clamps (delta_f < 0).
QuadrupletGradients quadruplet_gradients(const QuadrupletInstance& quad,
                                         const std::vector<Embedding>& embeddings,
                                         double alpha);

// Accumulates the gradients of batch_loss with respect to every embedding of
// the mini-batch: sums per-instance gradients and divides by the instance
// count (the 1/s factor). Returns one d-vector per entry of `embeddings`.
std::vector<Embedding> batch_loss_gradients(
    const std::vector<QuadrupletInstance>& instances,
    const std::vector<Embedding>& embeddings, const LossConfig& config);

// --- Baselines -------------------------------------------------------------

struct TripletResult {
  double loss = 0.0;
  Embedding d_anchor, d_positive, d_negative;
};

// max(0, |a-p|^2 - |a-n|^2 + alpha) with analytic gradients. The gradient
// gate mirrors the quadruplet convention: active when the bracket is >= 0.
TripletResult triplet_loss(const Embedding& anchor, const Embedding& positive,
                           const Embedding& negative, double alpha);

struct CenterLossResult {
  double loss = 0.0;
  std::vector<Embedding> d_embeddings;      // one per input embedding
  std::vector<Embedding> center_deltas;     // running-mean update, one per center
};

// (lambda/2) * mean squared distance of each embedding to its identity's
// center. center_deltas follows the running-mean rule: delta_c = sum(c - f_i)
// over members / (1 + member count); callers apply c -= center_lr * delta_c.
CenterLossResult center_loss(const std::vector<Embedding>& embeddings,
                             const std::vector<Label>& identity_labels,
                             const std::vector<Embedding>& centers, double lambda);

struct SoftmaxResult {
  double loss = 0.0;
  std::vector<double> d_logits;
};

// Cross-entropy of the normalized exponential at the true identity.
SoftmaxResult softmax_loss(const std::vector<double>& logits, Label identity);

}  // namespace semquad

#endif  // SEMQUAD_LOSS_HPP_
