#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "evosmc/core.hpp"
#include "evosmc/rng.hpp"

namespace evosmc {

/// Directed graph with sorted, duplicate-free out-adjacency in CSR form.
class DirectedGraph {
public:
  using Edge = std::pair<std::size_t, std::size_t>;

  DirectedGraph() = default;
  DirectedGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return out_degree_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::span<const std::size_t> out_neighbors(std::size_t u) const noexcept {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::size_t out_degree(std::size_t u) const noexcept { return out_degree_[u]; }
  std::size_t in_degree(std::size_t v) const noexcept { return in_degree_[v]; }

  // Index of the first out-edge of u in the flat edge order.
  std::size_t edge_offset(std::size_t u) const noexcept { return offsets_[u]; }
  std::vector<Edge> edges() const;

private:
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> targets_;
  std::vector<std::size_t> out_degree_;
  std::vector<std::size_t> in_degree_;
};

/// Objective f: 2^V -> R>=0. Implementations are immutable after
/// construction and safe to evaluate concurrently.
class Objective {
public:
  virtual ~Objective() = default;
  virtual std::size_t ground_size() const = 0;
  virtual double value(const Subset& s) const = 0;
  virtual std::string_view name() const = 0;
};

/// Counted view of a shared objective. Each run owns one oracle; the
/// objective behind it is shared read-only.
class ObjectiveOracle {
public:
  explicit ObjectiveOracle(std::shared_ptr<const Objective> f) : f_(std::move(f)) {}
  ObjectiveOracle(const ObjectiveOracle& other) : f_(other.f_) {}

  double operator()(const Subset& s) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return f_->value(s);
  }

  std::uint64_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }
  std::size_t ground_size() const { return f_->ground_size(); }
  const Objective& objective() const noexcept { return *f_; }

private:
  std::shared_ptr<const Objective> f_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

// --- directed vertex cover -------------------------------------------------

/// f(S) = sum of w over S and every node pointed to by S.
class VertexCoverObjective final : public Objective {
public:
  VertexCoverObjective(DirectedGraph g, std::vector<double> weights);

  std::size_t ground_size() const override { return g_.node_count(); }
  double value(const Subset& s) const override;
  std::string_view name() const override { return "vc"; }

  const DirectedGraph& graph() const noexcept { return g_; }

private:
  DirectedGraph g_;
  std::vector<double> w_;
};

double vertex_cover_value(const DirectedGraph& g, std::span<const double> w, const Subset& s);

// c(v) = 1 + max(outdeg(v) - q, 0)
ModularCost vc_costs(const DirectedGraph& g, std::size_t q);

// --- influence maximization (independent cascade) --------------------------

struct IcModel {
  DirectedGraph graph;
  std::vector<double> edge_prob; // aligned with the CSR edge order
  std::size_t samples = 100;
  std::uint64_t seed = 0;
};

// Weighted cascade: p(u,v) = 1 / indeg(v).
std::vector<double> weighted_cascade_probs(const DirectedGraph& g);
std::vector<double> constant_probs(const DirectedGraph& g, double p);

/// Expected spread estimated over `samples` live-edge worlds drawn once at
/// construction. Within one objective, f is a deterministic coverage
/// function, hence exactly monotone and submodular.
class InfluenceObjective final : public Objective {
public:
  explicit InfluenceObjective(IcModel model);

  std::size_t ground_size() const override { return n_; }
  double value(const Subset& s) const override;
  std::string_view name() const override { return "im"; }

  std::size_t sample_count() const noexcept { return worlds_.size(); }

private:
  struct World {
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> targets;
  };
  std::size_t n_;
  std::vector<World> worlds_;
};

double ic_spread_estimate(const IcModel& model, const Subset& s);

// c(v) = lambda * outdeg(v)^gamma, or 1 for sinks; clamped to >= floor.
ModularCost im_costs(const DirectedGraph& g, double lambda, double gamma, double floor = 1e-6);

// --- entropy sensor placement ----------------------------------------------

/// Rows are time steps, columns are sensors.
struct SensorDataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> readings; // row-major
  std::size_t bins = 10;

  double at(std::size_t r, std::size_t c) const noexcept { return readings[r * cols + c]; }
};

/// Joint empirical entropy (nats) of the equal-width-binned readings of the
/// selected sensors.
class EntropyObjective final : public Objective {
public:
  explicit EntropyObjective(const SensorDataset& data);

  std::size_t ground_size() const override { return cols_; }
  double value(const Subset& s) const override;
  std::string_view name() const override { return "entropy"; }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint16_t> binned_; // column-major
};

double entropy_value(const SensorDataset& d, const Subset& s);

// max(|N(0,1)|, floor) per element.
ModularCost gaussian_costs(std::size_t n, Rng& rng, double floor = 0.1);

} // namespace evosmc
