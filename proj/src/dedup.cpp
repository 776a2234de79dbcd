#include "evosmc/dedup.hpp"

#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

#include "evosmc/errors.hpp"

namespace evosmc {

SubsetFingerprint fingerprint(const Subset& s) noexcept {
  std::uint64_t h = mix64(0x243f6a8885a308d3ULL ^ s.universe_size());
  std::uint64_t i = 0;
  for (std::uint64_t w : s.words()) {
    h = mix64(h ^ mix64(w + 0x9e3779b97f4a7c15ULL * ++i));
  }
  return {h};
}

BloomFilter::BloomFilter(std::uint64_t iterations, Rng& rng, std::uint64_t memory_cap_bytes)
    : capacity_(iterations) {
  if (iterations == 0) throw std::invalid_argument("BloomFilter: T must be >= 1");
  if (iterations > std::numeric_limits<std::uint64_t>::max() / bits_per_element)
    throw resource_error("BloomFilter: 16T overflows");
  m_ = bits_per_element * iterations;
  const std::uint64_t words = (m_ + 63) / 64;
  if (words * 8 > memory_cap_bytes) {
    throw resource_error("BloomFilter: " + std::to_string(m_) + " bits exceed the " +
                         std::to_string(memory_cap_bytes) + "-byte memory cap");
  }
  for (auto& p : params_) {
    p.a = rng.next_u64() | 1u;
    p.b = rng.next_u64();
  }
  bits_.assign(words, 0);
}

std::uint64_t BloomFilter::index(std::size_t i, std::uint64_t x) const noexcept {
  const std::uint64_t h = params_[i].a * x + params_[i].b;
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * m_) >> 64);
}

bool BloomFilter::check(SubsetFingerprint fp) const noexcept {
  for (std::size_t i = 0; i < hash_count; ++i) {
    const std::uint64_t j = index(i, fp.value);
    if (!((bits_[j >> 6] >> (j & 63)) & 1u)) return false;
  }
  return true;
}

void BloomFilter::insert(SubsetFingerprint fp) noexcept {
  for (std::size_t i = 0; i < hash_count; ++i) {
    const std::uint64_t j = index(i, fp.value);
    bits_[j >> 6] |= std::uint64_t{1} << (j & 63);
  }
  ++inserted_;
}

std::uint64_t BloomFilter::set_bit_count() const noexcept {
  std::uint64_t c = 0;
  for (auto w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

PrecheckDecision precheck(const Subset& s, const Subset& s_mut, const BloomFilter* filter) {
  if (s_mut == s) return PrecheckDecision::SkipUnchanged;
  if (filter != nullptr && filter->check(fingerprint(s_mut))) return PrecheckDecision::SkipSeen;
  return PrecheckDecision::Evaluate;
}

} // namespace evosmc
