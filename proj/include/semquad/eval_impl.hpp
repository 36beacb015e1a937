#ifndef SEMQUAD_EVAL_IMPL_HPP_
#define SEMQUAD_EVAL_IMPL_HPP_

#include <cmath>

#include "semquad/rng.hpp"

namespace semquad {

template <typename MetricFn>
Statistic bootstrap_eval(const MetricFn& metric, std::size_t test_size,
                         std::size_t trials, double fraction, std::uint64_t seed) {
  if (test_size == 0) throw ConfigError("bootstrap_eval: empty test set");
  if (trials == 0) throw ConfigError("bootstrap_eval: trials must be >= 1");
  if (fraction <= 0.0 || fraction > 1.0) {
    throw ConfigError("bootstrap_eval: fraction must lie in (0, 1]");
  }
  std::size_t draws = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(test_size)));
  if (draws == 0) draws = 1;

  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, test_size - 1);
  std::vector<double> values;
  values.reserve(trials);
  std::vector<std::size_t> indices(draws);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t& k : indices) k = pick(rng);
    values.push_back(metric(indices));
  }

  Statistic stat;
  for (double v : values) stat.mean += v;
  stat.mean /= static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - stat.mean) * (v - stat.mean);
    stat.stddev = std::sqrt(ss / static_cast<double>(trials - 1));
  }
  return stat;
}

}  // namespace semquad

#endif  // SEMQUAD_EVAL_IMPL_HPP_
