#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "evosmc/core.hpp"
#include "evosmc/dedup.hpp"
#include "evosmc/objectives.hpp"
#include "evosmc/rng.hpp"

namespace evosmc {

struct PoolEntry {
  Subset subset;
  double f = 0.0;
  double g = 0.0;
  double cost = 0.0;
  bool initialized = false;
};

/// Cardinality-indexed archives. F[i] and G[i] hold size-i sets (best by f
/// and by g); Gp[i] holds the best one-element augmentation of some past
/// G[i]. All three have n + 1 slots.
struct SolutionPool {
  explicit SolutionPool(std::size_t n);

  std::size_t universe_size() const noexcept { return F.size() - 1; }

  std::vector<PoolEntry> F;
  std::vector<PoolEntry> G;
  std::vector<PoolEntry> Gp;
};

struct UpdateOutcome {
  bool replaced_f = false;
  bool replaced_g = false;
  bool replaced_gp = false;
  bool augmented = false;            // the augmentation step ran
  std::size_t feasible_aug = 0;      // elements that fit next to the old G_i
  std::uint64_t aug_evaluations = 0;
};

/// Pool update for an already evaluated mutant. Infeasible mutants are
/// ignored. When g improves, the old G_i is augmented by the feasible element
/// of largest marginal gain (lowest index on ties) and G'_i updated if that
/// beats it; the augmentation evaluations go through `oracle`.
UpdateOutcome pool_update(SolutionPool& pool, const Subset& s_mut, double f_mut, double cost_mut,
                          const ObjectiveOracle& oracle, const ModularCost& c, Budget beta);

// Convenience form that checks feasibility and evaluates f(s_mut) itself.
UpdateOutcome pool_update(SolutionPool& pool, const Subset& s_mut, const ObjectiveOracle& oracle,
                          const ModularCost& c, Budget beta);

/// Max f over every slot; ties go to smaller cost, then smaller cardinality,
/// then lexicographically smaller member list.
const PoolEntry& best_of_pools(const SolutionPool& pool);

// --- run instrumentation ---------------------------------------------------

enum class MutantOutcome { Unchanged, Infeasible, Seen, Evaluated };

struct IterationInfo {
  std::uint64_t iteration;      // 1-based
  std::size_t selected_slot;    // uniform draw: [0,n) is F, [n,2n) is G
  bool heads;                   // coin override to G_omega (st-evo only)
  const Subset* parent;
  const Subset* mutant;
  MutantOutcome outcome;
  UpdateOutcome update;
  double best_f;
  std::uint64_t oracle_calls;
  double selected_cost_ratio;
};

using IterationHook = std::function<void(const IterationInfo&)>;

struct Breakpoint {
  std::size_t index = 0;
  std::uint64_t iteration = 0;
  double best_f = 0.0;
  std::uint64_t oracle_calls = 0;
  double cost_ratio = 0.0;
  double feasible_aug_ratio = 1.0;
  double stay_same_ratio = 0.0;
  double seen_before_ratio = 0.0;
};

struct RunTrace {
  std::vector<Breakpoint> breakpoints;
};

struct RunStats {
  std::uint64_t iterations = 0;
  std::uint64_t skip_unchanged = 0;
  std::uint64_t infeasible = 0;
  std::uint64_t skip_seen = 0;
  std::uint64_t evaluate_decisions = 0;
  std::uint64_t mutant_evaluations = 0;
  std::uint64_t augmentation_evaluations = 0;
  std::uint64_t bloom_inserts = 0;
  std::uint64_t pool_violations = 0;
};

struct StochState {
  std::uint64_t omega = 0;
  std::uint64_t ell = 1;
  std::uint64_t h = 1;
  std::uint64_t heads = 0;
};

struct RunResult {
  Subset best_subset;
  double best_f = 0.0;
  double best_cost = 0.0;
  std::uint64_t oracle_calls = 0;
  RunStats stats;
  RunTrace trace;
  std::optional<StochState> stoch;
};

struct RunOptions {
  bool dedup = true;            // bloom filter (Task 2); Task 1 always runs
  bool verify_pool = false;     // check pool invariants after every iteration
  std::vector<std::uint64_t> breakpoints; // strictly increasing iterations
  IterationHook hook;
  std::uint64_t bloom_memory_cap = BloomFilter::default_memory_cap;
};

RunResult evo_smc(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta,
                  std::uint64_t iterations, Rng& rng, const RunOptions& opts = {});

RunResult st_evo_smc(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta,
                     std::uint64_t iterations, BoundParams params, Rng& rng,
                     const RunOptions& opts = {});

struct GreedyStep {
  std::size_t step;
  double best_f;
  std::uint64_t oracle_calls;
  double prefix_cost;
};

/// Density greedy with a best-single-element augmentation of every prefix
/// (including the empty one).
RunResult greedy_max(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta,
                     const std::function<void(const GreedyStep&)>& on_step = {});

struct BruteForceResult {
  Subset opt_subset;
  double opt_value = 0.0;
  std::optional<std::size_t> o_star; // max-cost element of the optimum
};

inline constexpr std::size_t brute_force_cap = 24;

/// Exhaustive search over all 2^n subsets (n <= 24). Ties go to the
/// lexicographically smallest member list.
BruteForceResult brute_force_opt(const ObjectiveOracle& oracle, const ModularCost& c, Budget beta);

} // namespace evosmc
