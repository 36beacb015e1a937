#include "semquad/mining.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "semquad/metric.hpp"

namespace semquad {

namespace {

// Positions k..n-1 of `scratch` hold an unbiased remainder of a Fisher-Yates
// shuffle; repeatedly swapping into the prefix yields distinct uniform draws.
std::size_t draw_into_prefix(std::vector<std::size_t>& scratch, std::size_t k, Rng& rng) {
  std::uniform_int_distribution<std::size_t> dist(k, scratch.size() - 1);
  std::swap(scratch[k], scratch[dist(rng)]);
  return scratch[k];
}

}  // namespace

Batch sample_batch(std::size_t dataset_size, std::size_t b, Rng& rng) {
  if (b > dataset_size) {
    throw ConfigError("batch size " + std::to_string(b) + " exceeds dataset size " +
                      std::to_string(dataset_size));
  }
  std::vector<std::size_t> scratch(dataset_size);
  std::iota(scratch.begin(), scratch.end(), std::size_t{0});
  Batch batch;
  batch.sample_indices.reserve(b);
  for (std::size_t k = 0; k < b; ++k) {
    batch.sample_indices.push_back(draw_into_prefix(scratch, k, rng));
  }
  return batch;
}

MiniBatch sample_minibatch(const Batch& batch,
                           const std::vector<LabelVector>& batch_labels,
                           std::size_t s, Rng& rng, std::size_t max_attempts) {
  if (batch.size() == 0) throw ConfigError("sample_minibatch: empty batch");
  if (batch_labels.size() != batch.size()) {
    throw DimensionError("sample_minibatch: got " + std::to_string(batch_labels.size()) +
                         " label vectors for a batch of " + std::to_string(batch.size()));
  }
  if (s == 0) throw ConfigError("sample_minibatch: s must be >= 1");
  if (max_attempts == 0) max_attempts = 50 * s;

  MiniBatch out;
  const std::size_t b = batch.size();
  if (b < 4) {
    out.degenerate = true;
    return out;
  }

  // The three perfect pairings of a sorted 4-tuple.
  static constexpr std::array<std::array<std::size_t, 4>, 3> kPairings = {{
      {0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};

  std::vector<std::size_t> scratch(b);
  std::iota(scratch.begin(), scratch.end(), std::size_t{0});
  std::uniform_int_distribution<std::size_t> pairing_dist(0, 2);

  out.instances.reserve(s);
  for (std::size_t attempt = 0; attempt < max_attempts && out.instances.size() < s;
       ++attempt) {
    std::array<std::size_t, 4> picks{};
    for (std::size_t k = 0; k < 4; ++k) picks[k] = draw_into_prefix(scratch, k, rng);
    std::sort(picks.begin(), picks.end());

    const auto& pairing = kPairings[pairing_dist(rng)];
    QuadrupletInstance quad;
    quad.i = picks[pairing[0]];
    quad.j = picks[pairing[1]];
    quad.p = picks[pairing[2]];
    quad.q = picks[pairing[3]];
    quad.phi_ij = semantic_dissimilarity(batch_labels[quad.i], batch_labels[quad.j]);
    quad.phi_pq = semantic_dissimilarity(batch_labels[quad.p], batch_labels[quad.q]);
    if (quad.phi_ij == quad.phi_pq) continue;
    out.instances.push_back(canonicalize(quad));
  }
  out.degenerate = out.instances.empty();
  return out;
}

std::vector<TripletIndices> sample_triplets(const std::vector<LabelVector>& batch_labels,
                                            const std::vector<Embedding>* embeddings,
                                            std::size_t s, double alpha, bool semi_hard,
                                            Rng& rng, std::size_t max_attempts) {
  const std::size_t b = batch_labels.size();
  if (max_attempts == 0) max_attempts = 50 * s;
  std::vector<TripletIndices> out;
  if (b < 3) return out;

  std::uniform_int_distribution<std::size_t> pos_dist(0, b - 1);
  std::vector<std::size_t> candidates;
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < s; ++attempt) {
    const std::size_t anchor = pos_dist(rng);
    const Label anchor_id = batch_labels[anchor][0];

    candidates.clear();
    for (std::size_t k = 0; k < b; ++k) {
      if (k != anchor && batch_labels[k][0] == anchor_id) candidates.push_back(k);
    }
    if (candidates.empty()) continue;
    const std::size_t positive =
        candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];

    candidates.clear();
    for (std::size_t k = 0; k < b; ++k) {
      if (batch_labels[k][0] != anchor_id) candidates.push_back(k);
    }
    if (candidates.empty()) continue;

    if (semi_hard && embeddings != nullptr) {
      const double d_ap = squared_distance((*embeddings)[anchor], (*embeddings)[positive]);
      std::vector<std::size_t> band;
      for (std::size_t k : candidates) {
        const double d_an = squared_distance((*embeddings)[anchor], (*embeddings)[k]);
        if (d_an > d_ap && d_an < d_ap + alpha) band.push_back(k);
      }
      if (!band.empty()) candidates = std::move(band);
    }
    const std::size_t negative =
        candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    out.push_back(TripletIndices{anchor, positive, negative});
  }
  return out;
}

}  // namespace semquad
