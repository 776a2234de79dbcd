#include "evosmc/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace evosmc {

DirectedGraph::DirectedGraph(std::size_t n, std::vector<Edge> edges)
    : out_degree_(n, 0), in_degree_(n, 0) {
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("DirectedGraph: edge endpoint out of range");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  offsets_.assign(n + 1, 0);
  targets_.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    ++out_degree_[u];
    ++in_degree_[v];
    targets_.push_back(v);
  }
  for (std::size_t u = 0; u < n; ++u) offsets_[u + 1] = offsets_[u] + out_degree_[u];
}

std::vector<DirectedGraph::Edge> DirectedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < node_count(); ++u)
    for (auto v : out_neighbors(u)) out.emplace_back(u, v);
  return out;
}

// --- vertex cover -----------------------------------------------------------

double vertex_cover_value(const DirectedGraph& g, std::span<const double> w, const Subset& s) {
  if (s.universe_size() != g.node_count() || w.size() != g.node_count())
    throw std::invalid_argument("vertex_cover_value: dimension mismatch");
  Subset covered = s;
  s.for_each([&](std::size_t u) {
    for (auto v : g.out_neighbors(u)) covered.insert(v);
  });
  double total = 0.0;
  covered.for_each([&](std::size_t u) { total += w[u]; });
  return total;
}

VertexCoverObjective::VertexCoverObjective(DirectedGraph g, std::vector<double> weights)
    : g_(std::move(g)), w_(std::move(weights)) {
  if (w_.size() != g_.node_count())
    throw std::invalid_argument("VertexCoverObjective: weight count != node count");
  for (double x : w_)
    if (!(x >= 0.0)) throw std::invalid_argument("VertexCoverObjective: negative weight");
}

double VertexCoverObjective::value(const Subset& s) const {
  return vertex_cover_value(g_, w_, s);
}

ModularCost vc_costs(const DirectedGraph& g, std::size_t q) {
  std::vector<double> c(g.node_count());
  for (std::size_t v = 0; v < c.size(); ++v) {
    const std::size_t d = g.out_degree(v);
    c[v] = 1.0 + static_cast<double>(d > q ? d - q : 0);
  }
  return ModularCost(std::move(c));
}

// --- influence --------------------------------------------------------------

std::vector<double> weighted_cascade_probs(const DirectedGraph& g) {
  std::vector<double> p;
  p.reserve(g.edge_count());
  for (std::size_t u = 0; u < g.node_count(); ++u)
    for (auto v : g.out_neighbors(u)) p.push_back(1.0 / static_cast<double>(g.in_degree(v)));
  return p;
}

std::vector<double> constant_probs(const DirectedGraph& g, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("constant_probs: p outside [0,1]");
  return std::vector<double>(g.edge_count(), p);
}

InfluenceObjective::InfluenceObjective(IcModel model) : n_(model.graph.node_count()) {
  const auto& g = model.graph;
  if (model.samples == 0) throw std::invalid_argument("IcModel: samples must be >= 1");
  if (model.edge_prob.size() != g.edge_count())
    throw std::invalid_argument("IcModel: one probability per edge required");
  for (double p : model.edge_prob)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("IcModel: probability outside [0,1]");
  if (n_ >= std::numeric_limits<std::uint32_t>::max() ||
      g.edge_count() >= std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("IcModel: graph too large");

  Rng rng(model.seed);
  worlds_.resize(model.samples);
  for (auto& world : worlds_) {
    world.offsets.assign(n_ + 1, 0);
    for (std::size_t u = 0; u < n_; ++u) {
      std::size_t e = g.edge_offset(u);
      for (auto v : g.out_neighbors(u)) {
        if (rng.uniform() < model.edge_prob[e++]) world.targets.push_back(static_cast<std::uint32_t>(v));
      }
      world.offsets[u + 1] = static_cast<std::uint32_t>(world.targets.size());
    }
    world.targets.shrink_to_fit();
  }
}

double InfluenceObjective::value(const Subset& s) const {
  if (s.universe_size() != n_) throw std::invalid_argument("InfluenceObjective: dimension mismatch");
  if (s.empty()) return 0.0;
  const auto seeds = s.members();
  std::vector<std::uint32_t> stamp(n_, 0);
  std::vector<std::uint32_t> queue;
  queue.reserve(n_);
  std::uint64_t reached = 0;
  std::uint32_t tag = 0;
  for (const auto& world : worlds_) {
    ++tag;
    queue.clear();
    for (auto v : seeds) {
      stamp[v] = tag;
      queue.push_back(static_cast<std::uint32_t>(v));
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto u = queue[head];
      for (auto k = world.offsets[u]; k < world.offsets[u + 1]; ++k) {
        const auto v = world.targets[k];
        if (stamp[v] != tag) {
          stamp[v] = tag;
          queue.push_back(v);
        }
      }
    }
    reached += queue.size();
  }
  return static_cast<double>(reached) / static_cast<double>(worlds_.size());
}

double ic_spread_estimate(const IcModel& model, const Subset& s) {
  return InfluenceObjective(model).value(s);
}

ModularCost im_costs(const DirectedGraph& g, double lambda, double gamma, double floor) {
  if (!(lambda > 0.0)) throw std::invalid_argument("im_costs: lambda must be > 0");
  std::vector<double> c(g.node_count());
  for (std::size_t v = 0; v < c.size(); ++v) {
    const std::size_t d = g.out_degree(v);
    const double raw = d == 0 ? 1.0 : lambda * std::pow(static_cast<double>(d), gamma);
    c[v] = std::max(raw, floor);
  }
  return ModularCost(std::move(c));
}

// --- entropy ----------------------------------------------------------------

EntropyObjective::EntropyObjective(const SensorDataset& d) : rows_(d.rows), cols_(d.cols) {
  if (d.bins == 0 || d.bins > std::numeric_limits<std::uint16_t>::max())
    throw std::invalid_argument("SensorDataset: bins out of range");
  if (d.readings.size() != d.rows * d.cols)
    throw std::invalid_argument("SensorDataset: readings size != rows * cols");
  if (d.rows == 0) throw std::invalid_argument("SensorDataset: no rows");
  binned_.resize(rows_ * cols_);
  const double bins = static_cast<double>(d.bins);
  for (std::size_t c = 0; c < cols_; ++c) {
    double lo = d.at(0, c), hi = lo;
    for (std::size_t r = 1; r < rows_; ++r) {
      lo = std::min(lo, d.at(r, c));
      hi = std::max(hi, d.at(r, c));
    }
    const double width = hi - lo;
    for (std::size_t r = 0; r < rows_; ++r) {
      std::size_t b = 0;
      if (width > 0.0) {
        b = static_cast<std::size_t>(std::floor((d.at(r, c) - lo) / width * bins));
        b = std::min(b, d.bins - 1);
      }
      binned_[c * rows_ + r] = static_cast<std::uint16_t>(b);
    }
  }
}

double EntropyObjective::value(const Subset& s) const {
  if (s.universe_size() != cols_) throw std::invalid_argument("EntropyObjective: dimension mismatch");
  if (s.empty()) return 0.0;
  const auto sensors = s.members();
  std::vector<std::uint32_t> order(rows_);
  std::iota(order.begin(), order.end(), 0u);
  auto row_less = [&](std::uint32_t a, std::uint32_t b) {
    for (auto c : sensors) {
      const auto x = binned_[c * rows_ + a], y = binned_[c * rows_ + b];
      if (x != y) return x < y;
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);

  const double total = static_cast<double>(rows_);
  double h = 0.0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= rows_; ++i) {
    if (i < rows_ && !row_less(order[i - 1], order[i])) {
      ++run;
      continue;
    }
    const double p = static_cast<double>(run) / total;
    h -= p * std::log(p);
    run = 1;
  }
  // A single cell gives -1*log(1) = -0.0.
  return h == 0.0 ? 0.0 : h;
}

double entropy_value(const SensorDataset& d, const Subset& s) {
  return EntropyObjective(d).value(s);
}

ModularCost gaussian_costs(std::size_t n, Rng& rng, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("gaussian_costs: floor must be > 0");
  std::vector<double> c(n);
  for (auto& x : c) x = std::max(std::abs(rng.normal()), floor);
  return ModularCost(std::move(c));
}

} // namespace evosmc
