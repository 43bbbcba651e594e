#include <gtest/gtest.h>

#include <random>

#include "setpack/setpack.hpp"
#include "support/brute.hpp"

using namespace setpack;

TEST(Hereditary, Detection) {
  EXPECT_TRUE(is_hereditary(parse_instance("1 2 3\n1 2\n1 3\n2 3\n", Format::text)));
  EXPECT_FALSE(is_hereditary(parse_instance("1 2 3\n1 2\n1 3\n", Format::text)));
  EXPECT_TRUE(is_hereditary(parse_instance("1 2\n3 4\n", Format::text)));
  EXPECT_TRUE(is_hereditary(Instance{}));
}

TEST(Hereditary, ConstructorRejectsOpenInstance) {
  EXPECT_THROW(HereditaryInstance(parse_instance("1 2 3\n", Format::text)), InstanceError);
}

TEST(Closure, SingleTriple) {
  const auto h = hereditary_closure(parse_instance("1 2 3\n", Format::text));
  EXPECT_EQ(h.base().size(), 4u);
  EXPECT_TRUE(is_hereditary(h.base()));
}

TEST(Closure, SharedPairAddedOnce) {
  const auto h = hereditary_closure(parse_instance("1 2 3\n1 2 4\n", Format::text));
  EXPECT_EQ(h.base().size(), 2u + 5u);  // {1,2} {1,3} {2,3} {1,4} {2,4}
}

TEST(Closure, Idempotent) {
  const auto once = hereditary_closure(parse_instance("1 2 3\n3 4 5\n5 6\n", Format::text));
  const auto twice = hereditary_closure(once.base());
  EXPECT_EQ(serialize_instance(once.base(), Format::text), serialize_instance(twice.base(), Format::text));
}

TEST(SolveHereditary, SingleClosedTriple) {
  const auto h = hereditary_closure(parse_instance("1 2 3\n", Format::text));
  const auto res = solve_hereditary(h);
  EXPECT_EQ(res.packing, (VertexSet{0}));
  EXPECT_EQ(res.stats.final_weight, 2);
}

TEST(SolveHereditary, MatchingInstanceIsExact) {
  // 2-sets only: local search with tau >= 10 finds a maximum matching here
  const Instance inst = parse_instance("1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n1 4\n", Format::text);
  const auto res = solve_hereditary(HereditaryInstance(inst));
  EXPECT_EQ(res.stats.final_weight, brute::optimum(inst));
}

TEST(SolveHereditary, TauBelowTenRejected) {
  const auto h = hereditary_closure(parse_instance("1 2 3\n", Format::text));
  EXPECT_THROW(solve_hereditary(h, 1, 9), std::invalid_argument);
}

TEST(SolveHereditary, FourThirdsOnRandomClosedInstances) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto h = random_hereditary_instance(seed);
    const Instance& inst = h.base();
    const auto res = solve_hereditary(h, seed);
    const int opt = brute::optimum(inst);
    EXPECT_LE(3 * opt, 4 * res.stats.final_weight) << "seed " << seed;
    EXPECT_TRUE(brute::disjoint_family(inst, res.packing));
  }
}
