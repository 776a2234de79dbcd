#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace evosmc {

/// A subset of the ground set {0, ..., n-1} stored as a fixed-width bit
/// vector of 64-bit words. The cardinality is cached and kept in sync by
/// every mutating member.
class Subset {
public:
  Subset() = default;
  explicit Subset(std::size_t n);
  Subset(std::size_t n, std::initializer_list<std::size_t> members);

  std::size_t universe_size() const noexcept { return n_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool contains(std::size_t e) const noexcept {
    return (words_[e >> 6] >> (e & 63)) & 1u;
  }
  void insert(std::size_t e) noexcept;
  void erase(std::size_t e) noexcept;
  void flip(std::size_t e) noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::vector<std::size_t> members() const;

  // Calls fn(e) for every member in ascending order.
  template<typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        fn(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const Subset& a, const Subset& b) noexcept {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

  // Lexicographic order on the ascending member lists.
  friend bool lex_less(const Subset& a, const Subset& b);

private:
  std::size_t n_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Strictly positive per-element costs; the cost of a set is the sum of its
/// members' entries.
class ModularCost {
public:
  ModularCost() = default;
  explicit ModularCost(std::vector<double> per_element);

  std::size_t size() const noexcept { return c_.size(); }
  double operator[](std::size_t e) const noexcept { return c_[e]; }
  std::span<const double> values() const noexcept { return c_; }
  double total() const noexcept;

private:
  std::vector<double> c_;
};

struct Budget {
  double beta;
  explicit Budget(double b);
};

struct BoundParams {
  double epsilon;
  double p;
  BoundParams(double eps, double prob);
};

double subset_cost(const Subset& s, const ModularCost& c);

/// f(X)/c(X) for nonempty X, f(X) otherwise.
double surrogate_g(double f_value, double cost_value, std::size_t cardinality);

/// K_beta: the largest cardinality of any feasible set. With positive costs
/// this is the number of cheapest elements that fit.
std::size_t max_feasible_size(const ModularCost& c, Budget beta);

// Iteration bounds. All logarithms are natural.
std::uint64_t iterations_evo(std::size_t n, std::size_t k_beta);
// Variant with 16 e n K_beta ln n as the second term.
std::uint64_t iterations_evo_alt(std::size_t n, std::size_t k_beta);
std::uint64_t iterations_st(std::size_t n, std::size_t k_beta, BoundParams params);
std::uint64_t mutation_rounds_h(std::size_t n, double epsilon);

} // namespace evosmc
