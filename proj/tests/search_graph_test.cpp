#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "setpack/setpack.hpp"
#include "support/brute.hpp"

using namespace setpack;

namespace {

// a1 = {1,2,3}, a2 = {4,5,6}, v meets both
Instance bridge_instance() { return parse_instance("1 2 3\n4 5 6\n1 4 7\n", Format::text); }

// a = {1,2,3}; v1, v2 each meet only a and not each other
Instance double_loop_instance() { return parse_instance("1 2 3\n1 4 5\n2 6 7\n", Format::text); }

// three sets, each meeting both a1 and a2, pairwise disjoint
Instance theta_instance() { return parse_instance("1 2 3\n4 5 6\n1 4 7\n2 5 8\n3 6 9\n", Format::text); }

}  // namespace

TEST(EdgeInducingPair, TwoEndpoints) {
  const auto g = build_conflict_graph(bridge_instance());
  const auto e = is_edge_inducing_pair(g, {0, 1}, 4, {}, {2});
  ASSERT_TRUE(e);
  EXPECT_EQ(*e, (VertexSet{0, 1}));
  const auto sg = enumerate_search_edges(g, {0, 1}, 4);
  EXPECT_EQ(sg.vertices, (VertexSet{0, 1}));
  ASSERT_EQ(sg.edges.size(), 1u);
  EXPECT_EQ(sg.edges[0].ends, (VertexSet{0, 1}));
  EXPECT_TRUE(sg.edges[0].u.empty());
  EXPECT_EQ(sg.edges[0].w, (VertexSet{2}));
}

TEST(EdgeInducingPair, Loop) {
  const auto g = build_conflict_graph(parse_instance("1 2 3\n4 5 6\n1 7 8\n", Format::text));
  const auto e = is_edge_inducing_pair(g, {0, 1}, 4, {}, {2});
  ASSERT_TRUE(e);
  EXPECT_EQ(*e, (VertexSet{0}));
  const auto sg = enumerate_search_edges(g, {0, 1}, 4);
  ASSERT_EQ(sg.edges.size(), 1u);
  EXPECT_TRUE(sg.edges[0].is_loop());
}

TEST(EdgeInducingPair, WeightMismatch) {
  const auto g = build_conflict_graph(parse_instance("1 2 3\n1 4\n", Format::text));
  EXPECT_FALSE(is_edge_inducing_pair(g, {0}, 4, {}, {1}));
  EXPECT_TRUE(enumerate_search_edges(g, {0}, 4).edges.empty());
}

TEST(EdgeInducingPair, RejectsLightEndpoint) {
  // the only A-neighbor has weight 1
  const auto g = build_conflict_graph(parse_instance("1 2\n1 3 4\n", Format::text));
  EXPECT_FALSE(is_edge_inducing_pair(g, {0}, 4, {}, {1}));
}

TEST(EdgeInducingPair, SizeLimit) {
  const auto g = build_conflict_graph(double_loop_instance());
  EXPECT_TRUE(is_edge_inducing_pair(g, {0}, 1, {}, {1}));
  EXPECT_FALSE(is_edge_inducing_pair(g, {0}, 0, {}, {1}));
}

TEST(SearchGraph, EveryEdgeIsAnEdgeInducingPair) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = generate_random(12, 14, 0.6, rng());
    const auto g = build_conflict_graph(inst);
    const auto a = solve(inst, [] {
                     SearchParams p;
                     p.tau = 1;
                     p.coloring_reps = 16;
                     return p;
                   }())
                       .packing;
    const int tau = 2 + trial % 2;
    for (PairMode mode : {PairMode::canonical, PairMode::full}) {
      const auto sg = enumerate_search_edges(g, a, tau, mode);
      for (const auto& e : sg.edges) {
        const auto ends = is_edge_inducing_pair(g, a, tau, e.u, e.w);
        ASSERT_TRUE(ends);
        EXPECT_EQ(*ends, e.ends);
      }
    }
  }
}

TEST(SearchGraph, FullModeFindsEveryPairOnSmallGraphs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = generate_random(9, 8, 0.6, rng());
    const auto g = build_conflict_graph(inst);
    SearchParams p;
    p.tau = 1;
    p.coloring_reps = 16;
    const auto a = solve(inst, p).packing;
    const int tau = 2;
    const auto sg = enumerate_search_edges(g, a, tau, PairMode::full);
    // every (U, W) pair over all subsets, checked directly
    std::size_t expected = 0;
    const std::size_t n = g.size();
    for (std::uint32_t wm = 1; wm < (1U << n); ++wm) {
      VertexSet w;
      for (auto i : brute::subset_of(wm, n)) w.push_back(static_cast<VertexId>(i));
      if (static_cast<int>(w.size()) > tau) continue;
      for (std::uint32_t um = 0; um < (1U << a.size()); ++um) {
        VertexSet u;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (um >> i & 1U) u.push_back(a[i]);
        }
        if (is_edge_inducing_pair(g, a, tau, u, w)) ++expected;
      }
    }
    EXPECT_EQ(sg.edges.size(), expected);
  }
}

TEST(SearchGraph, EmptyForEmptyPacking) {
  const auto g = build_conflict_graph(theta_instance());
  const auto sg = enumerate_search_edges(g, {}, 4);
  EXPECT_TRUE(sg.vertices.empty());
  EXPECT_TRUE(sg.edges.empty());
}

TEST(SearchGraph, FullModeBudget) {
  const Instance inst = generate_random(20, 30, 0.5, 1);
  EXPECT_THROW(enumerate_search_edges(build_conflict_graph(inst), {}, 3, PairMode::full), std::invalid_argument);
}

TEST(ImprovingBinocular, NoLoopsDisjointIndependent) {
  const auto g = build_conflict_graph(theta_instance());
  const auto sg = enumerate_search_edges(g, {0, 1}, 4);
  LabeledBinocular b;
  for (const auto& e : sg.edges) {
    if (e.w.size() == 1) b.edges.push_back(e);
  }
  ASSERT_EQ(b.edges.size(), 3u);
  EXPECT_TRUE(b.loops().empty());
  EXPECT_TRUE(is_improving_binocular(b, g, {0, 1}));
}

TEST(ImprovingBinocular, LoopsWithAdjacentWVertices) {
  // loops at 0 with W = {1, 2} and W = {1, 3}; 2 and 3 conflict
  const ConflictGraph g({2, 2, 2, 2}, {{0, 1}, {0, 2}, {0, 3}, {2, 3}});
  LabeledBinocular b;
  b.edges.push_back({{0}, {}, {1, 2}});
  b.edges.push_back({{0}, {}, {1, 3}});
  EXPECT_FALSE(is_improving_binocular(b, g, {0}));
}

TEST(ImprovingBinocular, OverlappingLinkWSets) {
  const ConflictGraph g({2, 2, 2, 2, 2}, {{0, 2}, {1, 2}, {0, 3}, {1, 3}, {0, 4}, {1, 4}});
  LabeledBinocular b;
  b.edges.push_back({{0, 1}, {}, {2}});
  b.edges.push_back({{0, 1}, {}, {2, 3}});
  b.edges.push_back({{0, 1}, {}, {4}});
  EXPECT_FALSE(is_improving_binocular(b, g, {0, 1}));
}

TEST(ImprovingBinocular, LoopWeightInequality) {
  // one loop whose W barely pays for itself, one that does not
  const ConflictGraph g({2, 2, 1}, {{0, 1}, {0, 2}});
  LabeledBinocular b;
  b.edges.push_back({{0}, {}, {1}});
  b.edges.push_back({{0}, {}, {2}});
  EXPECT_FALSE(is_improving_binocular(b, g, {0}));  // 3 < 0 + 4
}

TEST(ExtractImprovement, DoubleLoop) {
  const Instance inst = double_loop_instance();
  const auto g = build_conflict_graph(inst);
  const auto sg = enumerate_search_edges(g, {0}, 4);
  EXPECT_EQ(sg.vertices, (VertexSet{0}));
  ASSERT_EQ(sg.edges.size(), 2u);
  LabeledBinocular b{sg.edges};
  EXPECT_TRUE(b.is_binocular());
  EXPECT_TRUE(is_improving_binocular(b, g, {0}));
  const VertexSet x = extract_improvement(b, g, {0});
  EXPECT_EQ(x, (VertexSet{1, 2}));
  EXPECT_TRUE(brute::is_local_improvement(inst, {0}, x));
}

TEST(ExtractImprovement, Theta) {
  const Instance inst = theta_instance();
  const auto g = build_conflict_graph(inst);
  LabeledBinocular b;
  for (const auto& e : enumerate_search_edges(g, {0, 1}, 4).edges) {
    if (e.w.size() == 1) b.edges.push_back(e);
  }
  const VertexSet x = extract_improvement(b, g, {0, 1});
  EXPECT_EQ(x, (VertexSet{2, 3, 4}));
  EXPECT_GE(weight_of(g, x), weight_of(g, b.u_union()) + 2);
  EXPECT_TRUE(brute::is_local_improvement(inst, {0, 1}, x));
}

TEST(ExtractImprovement, RejectsNonBinocular) {
  const auto g = build_conflict_graph(theta_instance());
  LabeledBinocular b;
  b.edges = enumerate_search_edges(g, {0, 1}, 4).edges;
  b.edges.resize(1);
  EXPECT_THROW(extract_improvement(b, g, {0, 1}), std::logic_error);
}

TEST(SearchGraph, DotOutput) {
  const auto g = build_conflict_graph(bridge_instance());
  std::ostringstream out;
  write_dot(out, enumerate_search_edges(g, {0, 1}, 4));
  EXPECT_NE(out.str().find("0 -- 1"), std::string::npos);
}
