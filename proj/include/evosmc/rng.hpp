#pragma once

#include <cstdint>
#include <random>

namespace evosmc {

// SplitMix64 finalizer. Used to derive independent seeds and as the subset
// fingerprint mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded 64-bit generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all conversions to reals and ranges are
/// done here so results do not depend on the standard library's
/// distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Independent sub-stream for (seed, stream). Stream 0 is not the parent.
  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(seed ^ mix64(stream + 0x5851f42d4c957f2dULL));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) by multiply-high range reduction.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * bound) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; consumes two uniforms per draw.
  double normal();

private:
  std::mt19937_64 engine_;
};

} // namespace evosmc
