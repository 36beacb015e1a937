#ifndef SEMQUAD_MINING_HPP_
#define SEMQUAD_MINING_HPP_

#include <cstddef>
#include <vector>

#include "semquad/loss.hpp"
#include "semquad/rng.hpp"
#include "semquad/types.hpp"

namespace semquad {

// b dataset indices drawn uniformly without replacement.
struct Batch {
  std::vector<std::size_t> sample_indices;

  std::size_t size() const { return sample_indices.size(); }
};

// Up to s canonical quadruplet instances over batch positions [0, b).
// Shorter than s only when the batch cannot supply enough valid structures;
// degenerate means not a single valid structure was found.
struct MiniBatch {
  std::vector<QuadrupletInstance> instances;
  bool degenerate = false;
};

Batch sample_batch(std::size_t dataset_size, std::size_t b, Rng& rng);

// Rejection sampling over (4 distinct positions, one of the 3 pairings of
// them): a draw is kept iff the two pairs disagree on a different number of
// labels. Instances are canonicalized before being emitted. max_attempts = 0
// selects the default of 50*s draws.
MiniBatch sample_minibatch(const Batch& batch,
                           const std::vector<LabelVector>& batch_labels,
                           std::size_t s, Rng& rng, std::size_t max_attempts = 0);

// Random valid (anchor, positive, negative) index triples for the triplet
// baseline: anchor/positive share the identity label, the negative does not.
// semi_hard restricts negatives to the margin band |a-p|^2 < |a-n|^2 <
// |a-p|^2 + alpha whenever such a negative exists for the drawn pair.
struct TripletIndices {
  std::size_t anchor = 0, positive = 0, negative = 0;
};

std::vector<TripletIndices> sample_triplets(const std::vector<LabelVector>& batch_labels,
                                            const std::vector<Embedding>* embeddings,
                                            std::size_t s, double alpha, bool semi_hard,
                                            Rng& rng, std::size_t max_attempts = 0);

}  // namespace semquad

#endif  // SEMQUAD_MINING_HPP_
