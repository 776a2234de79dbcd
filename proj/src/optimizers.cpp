#include "evosmc/optimizers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "evosmc/errors.hpp"
#include "evosmc/mutation.hpp"

namespace evosmc {

SolutionPool::SolutionPool(std::size_t n) {
  PoolEntry empty{Subset(n), 0.0, 0.0, 0.0, false};
  F.assign(n + 1, empty);
  G.assign(n + 1, empty);
  Gp.assign(n + 1, empty);
}

UpdateOutcome pool_update(SolutionPool& pool, const Subset& s_mut, double f_mut, double cost_mut,
                          const ObjectiveOracle& oracle, const ModularCost& c, Budget beta) {
  UpdateOutcome out;
  if (cost_mut > beta.beta) return out;
  const std::size_t i = s_mut.size();

  PoolEntry& fi = pool.F[i];
  const double g_mut = surrogate_g(f_mut, cost_mut, i);
  if (fi.f < f_mut) {
    fi = PoolEntry{s_mut, f_mut, g_mut, cost_mut, true};
    out.replaced_f = true;
  }

  PoolEntry& gi = pool.G[i];
  if (gi.g < g_mut) {
    out.augmented = true;
    const Subset& base = gi.subset;
    const std::size_t n = base.universe_size();
    std::optional<std::size_t> best_e;
    double best_gain = 0.0, best_val = 0.0;
    Subset candidate = base;
    for (std::size_t e = 0; e < n; ++e) {
      if (base.contains(e) || gi.cost + c[e] > beta.beta) continue;
      ++out.feasible_aug;
      candidate.insert(e);
      const double val = oracle(candidate);
      ++out.aug_evaluations;
      candidate.erase(e);
      const double gain = val - gi.f;
      if (!best_e || gain > best_gain) {
        best_e = e;
        best_gain = gain;
        best_val = val;
      }
    }
    if (best_e) {
      PoolEntry& gpi = pool.Gp[i];
      if (best_val > gpi.f) {
        Subset q = base;
        q.insert(*best_e);
        const double q_cost = gi.cost + c[*best_e];
        gpi = PoolEntry{std::move(q), best_val, surrogate_g(best_val, q_cost, i + 1), q_cost, true};
        out.replaced_gp = true;
      }
    }
    gi = PoolEntry{s_mut, f_mut, g_mut, cost_mut, true};
    out.replaced_g = true;
  }
  return out;
}

UpdateOutcome pool_update(SolutionPool& pool, const Subset& s_mut, const ObjectiveOracle& oracle,
                          const ModularCost& c, Budget beta) {
  const double cost = subset_cost(s_mut, c);
  if (cost > beta.beta) return {};
  return pool_update(pool, s_mut, oracle(s_mut), cost, oracle, c, beta);
}

namespace {

bool better_entry(const PoolEntry& a, const PoolEntry& b) {
  if (a.f != b.f) return a.f > b.f;
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
  return lex_less(a.subset, b.subset);
}

} // namespace

const PoolEntry& best_of_pools(const SolutionPool& pool) {
  const PoolEntry* best = &pool.F[0];
  for (const auto* arr : {&pool.F, &pool.G, &pool.Gp})
    for (const auto& e : *arr)
      if (better_entry(e, *best)) best = &e;
  return *best;
}

namespace {

// Tracks the previous f/g per slot to detect monotonicity violations.
class PoolVerifier {
public:
  PoolVerifier(const SolutionPool& pool, const ModularCost& c, Budget beta)
      : c_(c), beta_(beta), prev_f_(pool.F.size(), 0.0), prev_g_(pool.G.size(), 0.0) {}

  std::uint64_t check(const SolutionPool& pool) {
    std::uint64_t bad = 0;
    const double tol = 1e-9 * std::max(1.0, beta_.beta);
    for (std::size_t i = 0; i < pool.F.size(); ++i) {
      const auto& f = pool.F[i];
      const auto& g = pool.G[i];
      const auto& gp = pool.Gp[i];
      if (f.f < prev_f_[i]) ++bad;
      if (g.g < prev_g_[i]) ++bad;
      prev_f_[i] = f.f;
      prev_g_[i] = g.g;
      for (const PoolEntry* e : {&f, &g, &gp}) {
        if (e->cost > beta_.beta) ++bad;
        if (std::abs(subset_cost(e->subset, c_) - e->cost) > tol) ++bad;
      }
      if (f.initialized && f.subset.size() != i) ++bad;
      if (g.initialized && g.subset.size() != i) ++bad;
      // An uninitialized G_i augments as the empty set.
      if (gp.initialized && gp.subset.size() != i + 1 && gp.subset.size() != 1) ++bad;
      if (g.initialized && g.g != surrogate_g(g.f, g.cost, i)) ++bad;
    }
    return bad;
  }

private:
  const ModularCost& c_;
  Budget beta_;
  std::vector<double> prev_f_;
  std::vector<double> prev_g_;
};

struct StochControl {
  double p;
  StochState state;
};

RunResult run_evolutionary(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta,
                           std::uint64_t iterations, Rng& rng, const RunOptions& opts,
                           std::optional<StochControl> stoch) {
  const std::size_t n = oracle.ground_size();
  if (n == 0) throw std::invalid_argument("evolutionary run: empty ground set");
  if (c.size() != n) throw std::invalid_argument("evolutionary run: cost vector size != n");
  for (std::size_t k = 1; k < opts.breakpoints.size(); ++k)
    if (opts.breakpoints[k] <= opts.breakpoints[k - 1])
      throw std::invalid_argument("evolutionary run: breakpoints must be strictly increasing");

  // Drawn unconditionally so the mutation stream is the same with and
  // without the filter.
  Rng bloom_rng(rng.next_u64());
  std::optional<BloomFilter> bloom;
  if (opts.dedup && iterations > 0) bloom.emplace(iterations, bloom_rng, opts.bloom_memory_cap);

  SolutionPool pool(n);
  std::optional<PoolVerifier> verifier;
  if (opts.verify_pool) verifier.emplace(pool, c, beta);

  const std::uint64_t calls_before = oracle.calls();
  RunResult result;
  RunStats& st = result.stats;
  double best_f = 0.0;

  std::size_t next_bp = 0;
  double aug_ratio_sum = 0.0;
  std::uint64_t aug_ratio_count = 0;
  double last_aug_ratio = 1.0;

  for (std::uint64_t t = 1; t <= iterations; ++t) {
    const std::size_t slot = static_cast<std::size_t>(rng.below(2 * n));
    const PoolEntry* parent = slot < n ? &pool.F[slot] : &pool.G[slot - n];
    bool heads = false;
    if (stoch) {
      auto& s = stoch->state;
      if (rng.uniform() < stoch->p) {
        heads = true;
        parent = &pool.G[s.omega];
        ++s.heads;
        ++s.ell;
        if (s.ell % s.h == 0) s.omega = std::min<std::uint64_t>(s.omega + 1, n);
      }
    }
    const double selected_cost_ratio = parent->cost / beta.beta;
    // The update below may overwrite the slot the parent came from.
    const Subset parent_set = parent->subset;

    Subset mutant = mutate(parent_set, rng);
    MutantOutcome outcome;
    UpdateOutcome upd;
    const double cost = subset_cost(mutant, c);
    if (mutant == parent_set) {
      outcome = MutantOutcome::Unchanged;
      ++st.skip_unchanged;
    } else if (cost > beta.beta) {
      outcome = MutantOutcome::Infeasible;
      ++st.infeasible;
    } else {
      const auto decision = precheck(parent_set, mutant, bloom ? &*bloom : nullptr);
      if (decision == PrecheckDecision::SkipSeen) {
        outcome = MutantOutcome::Seen;
        ++st.skip_seen;
      } else {
        outcome = MutantOutcome::Evaluated;
        ++st.evaluate_decisions;
        const double f_mut = oracle(mutant);
        ++st.mutant_evaluations;
        if (bloom) {
          bloom->insert(fingerprint(mutant));
          ++st.bloom_inserts;
        }
        best_f = std::max(best_f, f_mut);
        upd = pool_update(pool, mutant, f_mut, cost, oracle, c, beta);
        st.augmentation_evaluations += upd.aug_evaluations;
        if (upd.replaced_gp) best_f = std::max(best_f, pool.Gp[mutant.size()].f);
        if (upd.augmented) {
          aug_ratio_sum += static_cast<double>(upd.feasible_aug) / static_cast<double>(n);
          ++aug_ratio_count;
        }
      }
    }
    ++st.iterations;
    if (verifier) st.pool_violations += verifier->check(pool);

    if (opts.hook) {
      opts.hook(IterationInfo{t, slot, heads, &parent_set, &mutant, outcome, upd, best_f,
                              oracle.calls() - calls_before, selected_cost_ratio});
    }

    if (next_bp < opts.breakpoints.size() && opts.breakpoints[next_bp] == t) {
      if (aug_ratio_count > 0) {
        last_aug_ratio = aug_ratio_sum / static_cast<double>(aug_ratio_count);
        aug_ratio_sum = 0.0;
        aug_ratio_count = 0;
      }
      const double dt = static_cast<double>(t);
      result.trace.breakpoints.push_back(Breakpoint{
          next_bp + 1, t, best_f, oracle.calls() - calls_before, selected_cost_ratio,
          last_aug_ratio, static_cast<double>(st.skip_unchanged) / dt,
          static_cast<double>(st.skip_seen) / dt});
      ++next_bp;
    }
  }
  assert(st.pool_violations == 0);

  const PoolEntry& best = best_of_pools(pool);
  result.best_subset = best.subset;
  result.best_f = best.f;
  result.best_cost = best.cost;
  result.oracle_calls = oracle.calls() - calls_before;
  if (stoch) result.stoch = stoch->state;
  return result;
}

} // namespace

RunResult evo_smc(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta,
                  std::uint64_t iterations, Rng& rng, const RunOptions& opts) {
  return run_evolutionary(oracle, c, beta, iterations, rng, opts, std::nullopt);
}

RunResult st_evo_smc(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta,
                     std::uint64_t iterations, BoundParams params, Rng& rng,
                     const RunOptions& opts) {
  StochControl ctl{params.p, {}};
  ctl.state.h = mutation_rounds_h(oracle.ground_size(), params.epsilon);
  return run_evolutionary(oracle, c, beta, iterations, rng, opts, ctl);
}

RunResult greedy_max(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta,
                     const std::function<void(const GreedyStep&)>& on_step) {
  const std::size_t n = oracle.ground_size();
  if (c.size() != n) throw std::invalid_argument("greedy_max: cost vector size != n");
  const std::uint64_t calls_before = oracle.calls();

  Subset prefix(n);
  double prefix_f = 0.0, prefix_cost = 0.0;
  Subset best = prefix;
  double best_f = 0.0, best_cost = 0.0;
  auto offer = [&](const Subset& s, double f, double cost) {
    if (f > best_f) {
      best = s;
      best_f = f;
      best_cost = cost;
    }
  };

  RunResult result;
  for (std::size_t step = 0;; ++step) {
    std::optional<std::size_t> dens_e, gain_e;
    double dens_best = 0.0, dens_val = 0.0, gain_val = 0.0;
    Subset candidate = prefix;
    for (std::size_t e = 0; e < n; ++e) {
      if (prefix.contains(e) || prefix_cost + c[e] > beta.beta) continue;
      candidate.insert(e);
      const double val = oracle(candidate);
      candidate.erase(e);
      const double density = (val - prefix_f) / c[e];
      if (!dens_e || density > dens_best) {
        dens_e = e;
        dens_best = density;
        dens_val = val;
      }
      if (!gain_e || val > gain_val) {
        gain_e = e;
        gain_val = val;
      }
    }
    if (!dens_e) break;

    Subset augmented = prefix;
    augmented.insert(*gain_e);
    offer(augmented, gain_val, prefix_cost + c[*gain_e]);

    prefix.insert(*dens_e);
    prefix_f = dens_val;
    prefix_cost += c[*dens_e];
    offer(prefix, prefix_f, prefix_cost);

    ++result.stats.iterations;
    if (on_step) on_step(GreedyStep{step + 1, best_f, oracle.calls() - calls_before, prefix_cost});
  }

  result.best_subset = std::move(best);
  result.best_f = best_f;
  result.best_cost = best_cost;
  result.oracle_calls = oracle.calls() - calls_before;
  result.stats.mutant_evaluations = result.oracle_calls;
  return result;
}

BruteForceResult brute_force_opt(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta) {
  const std::size_t n = oracle.ground_size();
  if (n > brute_force_cap) {
    throw resource_error("brute_force_opt: n=" + std::to_string(n) + " exceeds the enumeration cap of " +
                         std::to_string(brute_force_cap));
  }
  if (c.size() != n) throw std::invalid_argument("brute_force_opt: cost vector size != n");

  BruteForceResult res{Subset(n), 0.0, std::nullopt};
  // Masks are visited in increasing order; the first mask at the optimum is
  // not necessarily lexicographically smallest, so ties are compared.
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    Subset s(n);
    double cost = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
      if ((mask >> e) & 1u) {
        s.insert(e);
        cost += c[e];
      }
    }
    if (cost > beta.beta) continue;
    const double val = oracle(s);
    if (val > res.opt_value || (val == res.opt_value && lex_less(s, res.opt_subset))) {
      res.opt_subset = std::move(s);
      res.opt_value = val;
    }
  }
  if (!res.opt_subset.empty()) {
    std::size_t star = 0;
    double star_cost = -1.0;
    res.opt_subset.for_each([&](std::size_t e) {
      if (c[e] > star_cost) {
        star = e;
        star_cost = c[e];
      }
    });
    res.o_star = star;
  }
  return res;
}

} // namespace evosmc
