#pragma once

#include <cstddef>
#include <cstdint>

#include "evosmc/core.hpp"
#include "evosmc/rng.hpp"

namespace evosmc {

/// Flips each element's membership independently with probability 1/n.
/// Exactly n uniforms are drawn from rng, in ascending element order.
Subset mutate(const Subset& s, Rng& rng);

struct FlipStats {
  double mean_flips;
  double stay_same_rate;
};

/// Mutates the empty set `trials` times and reports the empirical mean
/// Hamming distance and the fraction of unchanged outcomes.
FlipStats expected_flip_stats(std::size_t n, std::uint64_t trials, Rng& rng);

// (1 - 1/n)^n, the probability that a mutation changes nothing.
double stay_same_probability(std::size_t n);

} // namespace evosmc
