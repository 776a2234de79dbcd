#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "evosmc/core.hpp"
#include "evosmc/rng.hpp"

namespace evosmc {

/// 64-bit digest of a subset's membership bits. Equal subsets over the same
/// ground set always produce equal fingerprints.
struct SubsetFingerprint {
  std::uint64_t value;
  friend bool operator==(SubsetFingerprint, SubsetFingerprint) = default;
};

SubsetFingerprint fingerprint(const Subset& s) noexcept;

/// Bloom filter over evaluated subsets: m = 16 T bits and k = 11 affine hash
/// functions h_i(x) = a_i x + b_i (mod 2^64), each reduced into [0, m) by a
/// multiply-high. a_i is odd, so each affine map is a bijection on 64-bit
/// words.
class BloomFilter {
public:
  static constexpr std::uint64_t bits_per_element = 16;
  static constexpr std::size_t hash_count = 11; // ceil(16 ln 2)
  // Default cap on the bit array, in bytes.
  static constexpr std::uint64_t default_memory_cap = std::uint64_t{1} << 30;

  BloomFilter(std::uint64_t iterations, Rng& rng,
              std::uint64_t memory_cap_bytes = default_memory_cap);

  bool check(SubsetFingerprint fp) const noexcept;
  void insert(SubsetFingerprint fp) noexcept;

  std::uint64_t bit_count() const noexcept { return m_; }
  std::uint64_t capacity() const noexcept { return capacity_; }
  std::uint64_t inserted_count() const noexcept { return inserted_; }
  std::uint64_t set_bit_count() const noexcept;

  struct HashParams {
    std::uint64_t a;
    std::uint64_t b;
    friend bool operator==(const HashParams&, const HashParams&) = default;
  };
  const std::array<HashParams, hash_count>& hash_params() const noexcept { return params_; }

private:
  std::uint64_t index(std::size_t i, std::uint64_t x) const noexcept;

  std::uint64_t capacity_;
  std::uint64_t m_;
  std::uint64_t inserted_ = 0;
  std::array<HashParams, hash_count> params_{};
  std::vector<std::uint64_t> bits_;
};

enum class PrecheckDecision { SkipUnchanged, SkipSeen, Evaluate };

/// Task 1 (S' equals S) then Task 2 (S' probably evaluated before). A null
/// filter disables Task 2. On Evaluate the caller inserts S' after
/// evaluating it.
PrecheckDecision precheck(const Subset& s, const Subset& s_mut, const BloomFilter* filter);

struct DedupCounters {
  std::uint64_t checks = 0;
  std::uint64_t skip_unchanged = 0;
  std::uint64_t skip_seen = 0;
  std::uint64_t inserts = 0;
};

} // namespace evosmc
