#include "semquad/metric.hpp"

namespace semquad {

std::size_t semantic_dissimilarity(const LabelVector& a, const LabelVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("semantic_dissimilarity: label vectors have lengths " +
                         std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) ++disagreements;
  }
  return disagreements;
}

double squared_distance(const Embedding& u, const Embedding& v) {
  if (u.size() != v.size()) {
    throw DimensionError("squared_distance: vectors have lengths " +
                         std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double diff = u[i] - v[i];
    sum += diff * diff;
  }
  return sum;
}

}  // namespace semquad
