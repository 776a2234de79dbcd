#include "evosmc/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace evosmc {

Subset::Subset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

Subset::Subset(std::size_t n, std::initializer_list<std::size_t> members)
    : Subset(n) {
  for (auto e : members) {
    if (e >= n) throw std::out_of_range("Subset: member outside ground set");
    insert(e);
  }
}

void Subset::insert(std::size_t e) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (e & 63);
  if (!(words_[e >> 6] & mask)) {
    words_[e >> 6] |= mask;
    ++count_;
  }
}

void Subset::erase(std::size_t e) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (e & 63);
  if (words_[e >> 6] & mask) {
    words_[e >> 6] &= ~mask;
    --count_;
  }
}

void Subset::flip(std::size_t e) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (e & 63);
  words_[e >> 6] ^= mask;
  if (words_[e >> 6] & mask)
    ++count_;
  else
    --count_;
}

std::vector<std::size_t> Subset::members() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for_each([&](std::size_t e) { out.push_back(e); });
  return out;
}

bool lex_less(const Subset& a, const Subset& b) {
  const auto ma = a.members();
  const auto mb = b.members();
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

ModularCost::ModularCost(std::vector<double> per_element) : c_(std::move(per_element)) {
  for (double v : c_) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("ModularCost: costs must be finite and > 0");
  }
}

double ModularCost::total() const noexcept {
  return std::accumulate(c_.begin(), c_.end(), 0.0);
}

Budget::Budget(double b) : beta(b) {
  if (!(b > 0.0)) throw std::invalid_argument("Budget: beta must be > 0");
}

BoundParams::BoundParams(double eps, double prob) : epsilon(eps), p(prob) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("BoundParams: epsilon must lie in (0,1]");
  if (!(prob > 0.0 && prob <= 1.0))
    throw std::invalid_argument("BoundParams: p must lie in (0,1]");
}

double subset_cost(const Subset& s, const ModularCost& c) {
  if (s.universe_size() != c.size())
    throw std::invalid_argument("subset_cost: subset and cost vector sizes differ");
  double sum = 0.0;
  s.for_each([&](std::size_t e) { sum += c[e]; });
  return sum;
}

double surrogate_g(double f_value, double cost_value, std::size_t cardinality) {
  if (cardinality == 0) return f_value;
  if (cost_value == 0.0)
    throw std::invalid_argument("surrogate_g: zero cost for a nonempty set");
  return f_value / cost_value;
}

std::size_t max_feasible_size(const ModularCost& c, Budget beta) {
  std::vector<double> sorted(c.values().begin(), c.values().end());
  std::sort(sorted.begin(), sorted.end());
  double used = 0.0;
  std::size_t k = 0;
  for (double v : sorted) {
    if (used + v > beta.beta) break;
    used += v;
    ++k;
  }
  return k;
}

namespace {

std::uint64_t ceil_to_u64(double x) {
  if (!(x >= 0.0)) return 0;
  return static_cast<std::uint64_t>(std::ceil(x));
}

} // namespace

std::uint64_t iterations_evo(std::size_t n, std::size_t k_beta) {
  if (n <= 1) throw std::invalid_argument("iterations_evo: n must be >= 2");
  const double nn = static_cast<double>(n);
  const double e = std::numbers::e;
  const double a = 4.0 * e * nn * nn * static_cast<double>(k_beta);
  const double b = 16.0 * e * nn * nn * std::log(nn);
  return ceil_to_u64(std::max(a, b));
}

std::uint64_t iterations_evo_alt(std::size_t n, std::size_t k_beta) {
  if (n <= 1) throw std::invalid_argument("iterations_evo_alt: n must be >= 2");
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k_beta);
  const double e = std::numbers::e;
  return ceil_to_u64(std::max(4.0 * e * nn * nn * kk, 16.0 * e * nn * kk * std::log(nn)));
}

std::uint64_t iterations_st(std::size_t n, std::size_t k_beta, BoundParams params) {
  if (n == 0) throw std::invalid_argument("iterations_st: n must be >= 1");
  const double t = 2.0 * std::numbers::e * static_cast<double>(n) *
                   static_cast<double>(k_beta) * std::log(1.0 / params.epsilon) / params.p;
  return ceil_to_u64(t);
}

std::uint64_t mutation_rounds_h(std::size_t n, double epsilon) {
  if (n == 0) throw std::invalid_argument("mutation_rounds_h: n must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("mutation_rounds_h: epsilon must lie in (0,1]");
  const double h = std::numbers::e * static_cast<double>(n) * std::log(1.0 / epsilon);
  return std::max<std::uint64_t>(1, ceil_to_u64(h));
}

} // namespace evosmc
