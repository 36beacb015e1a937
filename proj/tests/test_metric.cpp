#include "doctest.h"
#include "semquad/metric.hpp"

using namespace semquad;

TEST_CASE("semantic_dissimilarity counts disagreeing dimensions") {
  CHECK(semantic_dissimilarity({1, 2, 3}, {1, 2, 3}) == 0);
  CHECK(semantic_dissimilarity({1, 2, 3}, {1, 0, 3}) == 1);
  CHECK(semantic_dissimilarity({0, 1, 2}, {3, 4, 5}) == 3);
  CHECK(semantic_dissimilarity({7}, {7}) == 0);
  CHECK(semantic_dissimilarity({}, {}) == 0);
}

TEST_CASE("semantic_dissimilarity rejects mismatched lengths") {
  CHECK_THROWS_AS(semantic_dissimilarity({1, 2}, {1, 2, 3}), DimensionError);
}

TEST_CASE("squared_distance on hand-checked values") {
  // (4-1)^2 + (6-2)^2 = 9 + 16
  CHECK(squared_distance({1.0, 2.0}, {4.0, 6.0}) == 25.0);
  CHECK(squared_distance({1.5, -2.0, 0.0}, {1.5, -2.0, 0.0}) == 0.0);
  CHECK(squared_distance({-1.0}, {1.0}) == 4.0);
}

TEST_CASE("squared_distance rejects mismatched lengths") {
  CHECK_THROWS_AS(squared_distance({1.0}, {1.0, 2.0}), DimensionError);
}
