#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "evosmc/objectives.hpp"
#include "test_support.hpp"

using namespace evosmc;
using evosmc::testing::cover_by_definition;
using evosmc::testing::random_subset;

namespace {

DirectedGraph triangle() {
  // 1->2, 1->3, 3->2 on nodes 0..3
  return DirectedGraph(4, {{1, 2}, {1, 3}, {3, 2}});
}

} // namespace

TEST(DirectedGraph, CollapsesDuplicatesAndCountsDegrees) {
  DirectedGraph g(3, {{0, 1}, {0, 1}, {1, 2}, {2, 2}});
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.out_degree(0), 1u);
  EXPECT_EQ(g.in_degree(2), 2u);
  EXPECT_THROW(DirectedGraph(2, {{0, 2}}), std::out_of_range);
}

TEST(VertexCover, Examples) {
  const auto g = triangle();
  const std::vector<double> w(4, 1.0);
  EXPECT_EQ(vertex_cover_value(g, w, Subset(4)), 0.0);
  EXPECT_EQ(vertex_cover_value(g, w, Subset(4, {1})), 3.0);
  const std::vector<double> w2{0.5, 2, 3, 4};
  EXPECT_EQ(vertex_cover_value(g, w2, Subset(4, {0, 1, 2, 3})), 9.5);
}

TEST(VertexCover, MatchesSetUnionOnAllSubsets) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.below(8);
    const auto g = random_gnm(n, rng.below(n * (n - 1)) + 1, rng);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.uniform() * 3;
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      Subset s(n);
      for (std::size_t e = 0; e < n; ++e)
        if ((mask >> e) & 1u) s.insert(e);
      ASSERT_NEAR(vertex_cover_value(g, w, s), cover_by_definition(g, w, s), 1e-12);
    }
  }
}

TEST(VcCosts, Formula) {
  // node 0 has out-degree 7, node 1 has 2, node 8 has 0
  std::vector<DirectedGraph::Edge> edges;
  for (std::size_t v = 1; v <= 7; ++v) edges.emplace_back(0, v);
  edges.emplace_back(1, 2);
  edges.emplace_back(1, 3);
  const DirectedGraph g(9, edges);
  const auto c = vc_costs(g, 5);
  EXPECT_EQ(c[0], 3.0);
  EXPECT_EQ(c[1], 1.0);
  EXPECT_EQ(c[8], 1.0);
}

TEST(ImCosts, FormulaAndSinkOverride) {
  std::vector<DirectedGraph::Edge> edges;
  for (std::size_t v = 1; v <= 4; ++v) edges.emplace_back(0, v);
  const DirectedGraph g(5, edges);
  const auto c = im_costs(g, 1.2, 1.5);
  EXPECT_NEAR(c[0], 9.6, 1e-12);
  EXPECT_EQ(c[1], 1.0);
  EXPECT_THROW(im_costs(g, 0.0, 1.5), std::invalid_argument);
  // Tiny lambda clamps to the floor.
  EXPECT_EQ(im_costs(g, 1e-12, 1.0, 1e-6)[0], 1e-6);
}

TEST(Influence, ClosedForms) {
  IcModel lone{DirectedGraph(3, {}), {}, 50, 1};
  EXPECT_EQ(ic_spread_estimate(lone, Subset(3, {1})), 1.0);

  IcModel sure{DirectedGraph(2, {{0, 1}}), {1.0}, 50, 1};
  EXPECT_EQ(ic_spread_estimate(sure, Subset(2, {0})), 2.0);

  IcModel half{DirectedGraph(2, {{0, 1}}), {0.5}, 100000, 7};
  EXPECT_NEAR(ic_spread_estimate(half, Subset(2, {0})), 1.5, 0.01);
  EXPECT_EQ(ic_spread_estimate(half, Subset(2)), 0.0);
}

TEST(Influence, ChainReachability) {
  // 0->1->2 with p = 0.5 each: E = 1 + 0.5 + 0.25
  IcModel chain{DirectedGraph(3, {{0, 1}, {1, 2}}), {0.5, 0.5}, 200000, 3};
  EXPECT_NEAR(ic_spread_estimate(chain, Subset(3, {0})), 1.75, 0.01);
}

TEST(Influence, DeterministicPerSeed) {
  Rng rng(4);
  auto g = random_gnm(30, 120, rng);
  IcModel m{g, weighted_cascade_probs(g), 64, 99};
  InfluenceObjective a(m), b(m);
  const Subset s(30, {0, 5, 9});
  EXPECT_EQ(a.value(s), b.value(s));
  EXPECT_EQ(a.value(s), a.value(s));
  EXPECT_THROW(InfluenceObjective(IcModel{g, {}, 10, 0}), std::invalid_argument);
  EXPECT_THROW(InfluenceObjective(IcModel{g, weighted_cascade_probs(g), 0, 0}), std::invalid_argument);
}

TEST(Influence, WeightedCascadeProbabilities) {
  const DirectedGraph g(3, {{0, 2}, {1, 2}, {0, 1}});
  const auto p = weighted_cascade_probs(g);
  // CSR order: (0,1), (0,2), (1,2)
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], 0.5);
  EXPECT_EQ(p[2], 0.5);
}

TEST(Entropy, Examples) {
  SensorDataset d{8, 2, {0, 0, 1, 1, 2, 2, 3, 3, 0, 0, 1, 1, 2, 2, 3, 3}, 10};
  EXPECT_EQ(entropy_value(d, Subset(2)), 0.0);
  EXPECT_NEAR(entropy_value(d, Subset(2, {0})), std::log(4.0), 1e-12);
  // Identical columns: the pair carries no more information than one.
  EXPECT_NEAR(entropy_value(d, Subset(2, {0, 1})), std::log(4.0), 1e-12);
}

TEST(Entropy, ConstantColumnHasZeroEntropy) {
  SensorDataset d{3, 1, {5, 5, 5}, 10};
  EXPECT_EQ(entropy_value(d, Subset(1, {0})), 0.0);
}

TEST(GaussianCosts, FoldedNormalMeanAndFloor) {
  Rng rng(12);
  const auto c = gaussian_costs(100000, rng, 1e-9);
  double mean = 0.0;
  for (double x : c.values()) mean += x;
  mean /= static_cast<double>(c.size());
  EXPECT_NEAR(mean, std::sqrt(2.0 / std::numbers::pi), 0.01);

  Rng r2(12);
  const auto floored = gaussian_costs(1000, r2, 0.1);
  for (double x : floored.values()) EXPECT_GE(x, 0.1);
  Rng r3(12), r4(12);
  EXPECT_TRUE(std::ranges::equal(gaussian_costs(50, r3).values(), gaussian_costs(50, r4).values()));
  EXPECT_THROW(gaussian_costs(5, r3, 0.0), std::invalid_argument);
}

TEST(Oracle, CountsEveryEvaluation) {
  auto obj = std::make_shared<VertexCoverObjective>(triangle(), std::vector<double>(4, 1.0));
  ObjectiveOracle oracle(obj);
  for (int i = 0; i < 17; ++i) (void)oracle(Subset(4, {1}));
  EXPECT_EQ(oracle.calls(), 17u);
  ObjectiveOracle copy(oracle);
  EXPECT_EQ(copy.calls(), 0u);
}

// Diminishing returns and monotonicity on random nested pairs.
namespace {

void check_submodular(const Objective& f, std::uint64_t seed, int triples = 1000) {
  const std::size_t n = f.ground_size();
  Rng rng(seed);
  EXPECT_EQ(f.value(Subset(n)), 0.0);
  for (int t = 0; t < triples; ++t) {
    Subset a = random_subset(n, rng.uniform() * 0.4, rng);
    Subset b = a;
    for (std::size_t e = 0; e < n; ++e)
      if (rng.uniform() < 0.3) b.insert(e);
    std::vector<std::size_t> outside;
    for (std::size_t e = 0; e < n; ++e)
      if (!b.contains(e)) outside.push_back(e);
    const double fa = f.value(a), fb = f.value(b);
    ASSERT_LE(fa, fb + 1e-9);
    if (outside.empty()) continue;
    const std::size_t x = outside[rng.below(outside.size())];
    Subset ax = a, bx = b;
    ax.insert(x);
    bx.insert(x);
    ASSERT_GE(f.value(ax) - fa, f.value(bx) - fb - 1e-9);
  }
}

} // namespace

TEST(Properties, VertexCover) {
  Rng rng(1);
  auto g = random_gnm(40, 160, rng);
  std::vector<double> w(40);
  for (auto& x : w) x = rng.uniform();
  check_submodular(VertexCoverObjective(std::move(g), std::move(w)), 2);
}

TEST(Properties, Influence) {
  Rng rng(3);
  auto g = power_law_graph(40, 2.0, rng);
  check_submodular(InfluenceObjective({g, weighted_cascade_probs(g), 50, 4}), 5);
}

TEST(Properties, Entropy) {
  Rng rng(6);
  check_submodular(EntropyObjective(random_readings(300, 30, rng)), 7);
}
