#include "evosmc/mutation.hpp"

#include <cmath>
#include <stdexcept>

namespace evosmc {

Subset mutate(const Subset& s, Rng& rng) {
  const std::size_t n = s.universe_size();
  Subset out = s;
  if (n == 0) return out;
  const double rate = 1.0 / static_cast<double>(n);
  for (std::size_t e = 0; e < n; ++e) {
    if (rng.uniform() < rate) out.flip(e);
  }
  return out;
}

FlipStats expected_flip_stats(std::size_t n, std::uint64_t trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("expected_flip_stats: trials must be >= 1");
  const Subset empty(n);
  std::uint64_t total_flips = 0;
  std::uint64_t unchanged = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Subset m = mutate(empty, rng);
    total_flips += m.size();
    if (m.empty()) ++unchanged;
  }
  const double dt = static_cast<double>(trials);
  return {static_cast<double>(total_flips) / dt, static_cast<double>(unchanged) / dt};
}

double stay_same_probability(std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::pow(1.0 - 1.0 / nn, nn);
}

} // namespace evosmc
