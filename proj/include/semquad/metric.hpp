#ifndef SEMQUAD_METRIC_HPP_
#define SEMQUAD_METRIC_HPP_

#include "semquad/types.hpp"

namespace semquad {

// Number of disagreeing label dimensions between two samples (l0 norm of the
// label difference). 0 means a positive pair, t means fully disjoint classes.
std::size_t semantic_dissimilarity(const LabelVector& a, const LabelVector& b);

// Squared Euclidean distance between two points of the destination space.
double squared_distance(const Embedding& u, const Embedding& v);

}  // namespace semquad

#endif  // SEMQUAD_METRIC_HPP_
