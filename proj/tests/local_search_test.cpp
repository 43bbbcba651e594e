#include <gtest/gtest.h>

#include <random>

#include "setpack/setpack.hpp"
#include "support/brute.hpp"

using namespace setpack;

namespace {

Instance chain() { return parse_instance("1 2 3\n3 4\n4 5 6\n6 7\n", Format::text); }

// u1 = {a,b}, u2 = {c,d,e}, v1 = {c,f}, v2 = {a,d,g}
Instance tie_swap() { return parse_instance("a b\nc d e\nc f\na d g\n", Format::text); }

VertexSet random_packing(const ConflictGraph& g, std::mt19937_64& rng) {
  std::vector<VertexId> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<VertexId>(i);
  std::shuffle(order.begin(), order.end(), rng);
  VertexSet a;
  for (VertexId v : order) {
    if (rng() % 2 && std::none_of(a.begin(), a.end(), [&](VertexId u) { return g.adjacent(u, v); })) {
      insert_sorted(a, v);
    }
  }
  return a;
}

}  // namespace

TEST(Rational, Parses) {
  EXPECT_EQ(Rational::parse("3"), (Rational{3, 1}));
  EXPECT_EQ(Rational::parse("0.25"), (Rational{1, 4}));
  EXPECT_EQ(Rational::parse(".5"), (Rational{1, 2}));
  EXPECT_EQ(Rational::parse("4/6"), (Rational{2, 3}));
  EXPECT_THROW(Rational::parse("0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("-1"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1e-3"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
}

TEST(Tau, FromEpsilon) {
  EXPECT_EQ(tau_for_epsilon(Rational::parse("1")), 8);
  EXPECT_EQ(tau_for_epsilon(Rational::parse("2")), 4);
  EXPECT_EQ(tau_for_epsilon(Rational::parse("0.5")), 16);
  EXPECT_EQ(tau_for_epsilon(Rational::parse("0.3")), 28);  // ceil(6.67) = 7
  EXPECT_EQ(tau_for_epsilon(Rational::parse("3")), 4);
}

TEST(Tau, Resolution) {
  SearchParams p;
  EXPECT_EQ(p.resolved_tau(), 8);
  p.epsilon = Rational::parse("1");
  EXPECT_EQ(p.resolved_tau(), 8);
  p.tau = 3;
  EXPECT_THROW(p.resolved_tau(), std::invalid_argument);
  p.epsilon.reset();
  EXPECT_EQ(p.resolved_tau(), 3);
  p.mode = Mode::hereditary;
  EXPECT_EQ(p.resolved_tau(), 10);
}

TEST(LocalImprovement, AnySingletonOverEmpty) {
  const auto g = build_conflict_graph(chain());
  for (VertexId v = 0; v < 4; ++v) EXPECT_TRUE(is_local_improvement(g, {}, {v}));
}

TEST(LocalImprovement, NeutralSwapIsNotImprovement) {
  const Instance inst = tie_swap();
  const auto g = build_conflict_graph(inst);
  EXPECT_EQ(neighborhood(g, {2, 3}, {0, 1}), (VertexSet{0, 1}));
  EXPECT_FALSE(is_local_improvement(g, {0, 1}, {2, 3}));
  EXPECT_FALSE(brute::is_local_improvement(inst, {0, 1}, {2, 3}));
}

TEST(LocalImprovement, FullTieIsNotImprovement) {
  const auto g = build_conflict_graph(parse_instance("1 2 3\n3 4 5\n", Format::text));
  EXPECT_FALSE(is_local_improvement(g, {0}, {1}));
}

TEST(LocalImprovement, MoreHeavySetsAtEqualWeight) {
  const auto g = build_conflict_graph(parse_instance("1 2\n3 4\n1 3 5\n", Format::text));
  EXPECT_TRUE(is_local_improvement(g, {0, 1}, {2}));
}

TEST(LocalImprovement, DependentSetIsRejected) {
  const auto g = build_conflict_graph(chain());
  EXPECT_FALSE(is_local_improvement(g, {}, {0, 1}));
}

TEST(LocalImprovement, MatchesElementLevelCheck) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = generate_random(9, 10, 0.5, rng());
    const auto g = build_conflict_graph(inst);
    const VertexSet a = random_packing(g, rng);
    VertexSet x;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (rng() % 4 == 0) x.push_back(static_cast<VertexId>(v));
    }
    if (x.empty()) continue;
    EXPECT_EQ(is_local_improvement(g, a, x), brute::is_local_improvement(inst, a, x));
  }
}

TEST(FindImprovement, ChainTwoSetImprovementExists) {
  const auto g = build_conflict_graph(chain());
  EXPECT_TRUE(is_local_improvement(g, {1}, {0, 2}));
  // the smallest improvement wins, and {s1} alone already beats {s2}
  const auto imp = find_improvement(g, {1}, 2);
  ASSERT_TRUE(imp);
  EXPECT_EQ(imp->added, (VertexSet{0}));
  EXPECT_EQ(imp->removed, (VertexSet{1}));
}

TEST(FindImprovement, PairNeededWhenSingletonsOnlyTie) {
  const auto g = build_conflict_graph(parse_instance("1 2 3\n1 4 5\n2 6 7\n", Format::text));
  EXPECT_FALSE(find_improvement(g, {0}, 1));
  const auto imp = find_improvement(g, {0}, 2);
  ASSERT_TRUE(imp);
  EXPECT_EQ(imp->added, (VertexSet{1, 2}));
}

TEST(FindImprovement, EmptyPackingGetsSingleton) {
  const auto g = build_conflict_graph(chain());
  const auto imp = find_improvement(g, {}, 3);
  ASSERT_TRUE(imp);
  EXPECT_EQ(imp->added.size(), 1u);
}

TEST(FindImprovement, NoneAtLexicographicOptimum) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = generate_random(8, 7 + trial % 4, 0.5, rng());
    const auto g = build_conflict_graph(inst);
    const VertexSet opt = brute::lex_optimum(inst);
    const int n = static_cast<int>(g.size());
    EXPECT_FALSE(find_improvement(g, opt, n)) << "trial " << trial;
    EXPECT_FALSE(find_improvement(g, opt, n, ImprovementSearch::naive)) << "trial " << trial;
  }
}

TEST(FindImprovement, OracleOptimumAdmitsOnlyTies) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = generate_random(8, 9, 0.5, rng());
    const auto g = build_conflict_graph(inst);
    const auto opt = solve_exact(inst);
    if (auto imp = find_improvement(g, opt.witness, static_cast<int>(g.size()))) {
      EXPECT_EQ(weight_of(g, imp->added), weight_of(g, imp->removed));
    }
  }
}

TEST(FindImprovement, GrownMatchesNaiveAndBrute) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = generate_random(10, 6 + trial % 6, 0.5, rng());
    const auto g = build_conflict_graph(inst);
    const VertexSet a = random_packing(g, rng);
    const int tau = 1 + trial % 4;
    const auto grown = find_improvement(g, a, tau);
    const auto naive = find_improvement(g, a, tau, ImprovementSearch::naive);
    const auto ref = brute::min_improvement(inst, a, tau);
    ASSERT_EQ(grown.has_value(), ref.has_value());
    ASSERT_EQ(naive.has_value(), ref.has_value());
    if (ref) {
      EXPECT_EQ(grown->added, *ref);
      EXPECT_EQ(naive->added, *ref);
    }
  }
}

TEST(ApplyImprovement, IntoEmpty) {
  const auto g = build_conflict_graph(chain());
  EXPECT_EQ(apply_improvement(g, {}, VertexSet{2}), (VertexSet{2}));
}

TEST(ApplyImprovement, Chain) {
  const auto g = build_conflict_graph(chain());
  const auto a = apply_improvement(g, {1}, VertexSet{0, 2});
  EXPECT_EQ(a, (VertexSet{0, 2}));
  EXPECT_EQ(weight_of(g, a), 4);
}

TEST(ApplyImprovement, TieRaisesHeavyCount) {
  const auto g = build_conflict_graph(parse_instance("1 2\n3 4\n1 3 5\n", Format::text));
  const auto a = apply_improvement(g, {0, 1}, VertexSet{2});
  EXPECT_EQ(weight_of(g, a), 2);
  EXPECT_EQ(count_double(g, a), 1);
}

TEST(ApplyImprovement, RejectsNonImprovement) {
  const auto g = build_conflict_graph(chain());
  EXPECT_THROW(apply_improvement(g, {0, 2}, VertexSet{1}), std::logic_error);
}

TEST(Solve, EmptyInstance) {
  const auto res = solve(Instance{}, SearchParams{});
  EXPECT_TRUE(res.packing.empty());
  EXPECT_EQ(res.stats.iterations, 0);
}

TEST(Solve, DisjointSetsAreAllTaken) {
  const auto res = solve(parse_instance("1 2\n3 4 5\n6 7\n", Format::text), SearchParams{});
  EXPECT_EQ(res.packing, (VertexSet{0, 1, 2}));
  EXPECT_EQ(res.stats.final_weight, 4);
}

TEST(Solve, ChainReachesOptimum) {
  const Instance inst = chain();
  const auto res = solve(inst, SearchParams{});
  EXPECT_EQ(res.stats.final_weight, 4);
  EXPECT_EQ(brute::optimum(inst), 4);
}

TEST(Solve, Deterministic) {
  const Instance inst = generate_random(14, 20, 0.6, 4);
  SearchParams p;
  p.tau = 4;
  p.seed = 77;
  const auto a = solve(inst, p);
  const auto b = solve(inst, p);
  EXPECT_EQ(a.packing, b.packing);
  EXPECT_EQ(a.stats.iterations, b.stats.iterations);
}

TEST(Solve, ResultIsLocallyOptimal) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = generate_random(12, 14, 0.5, rng());
    SearchParams p;
    p.tau = 3;
    p.seed = rng();
    const auto res = solve(inst, p);
    const auto g = build_conflict_graph(inst);
    EXPECT_TRUE(is_independent(g, res.packing));
    EXPECT_FALSE(brute::min_improvement(inst, res.packing, 3));
    EXPECT_LE(res.stats.iterations, iteration_bound(g.size()));
  }
}

TEST(RunStats, JsonRoundTrip) {
  RunStats s{7, 3, 1, 9, 1.5};
  const RunStats back = nlohmann::json(s).get<RunStats>();
  EXPECT_EQ(back.iterations, 7);
  EXPECT_EQ(back.binoculars_applied, 1);
  EXPECT_EQ(back.final_weight, 9);
}
