#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gridot/errors.hpp"
#include "gridot/oracle.hpp"
#include "gridot/sparsity.hpp"
#include "support/instances.hpp"

namespace gridot {
namespace {

using testing::measure;

TransportPlan plan(std::vector<std::int64_t> src, std::vector<std::int64_t> tgt,
                   std::vector<PlanEntry> entries) {
  return TransportPlan(GridShape(std::move(src)), GridShape(std::move(tgt)), std::move(entries));
}

TEST(PlanCost, Examples) {
  EXPECT_EQ(plan_cost(plan({1, 1}, {1, 1}, {{0, 0, 7}})), 0);
  EXPECT_EQ(plan_cost(plan({3}, {3}, {{0, 2, 2}})), 8);
}

TEST(PlanCost, ForcedTwoByOnePlan) {
  const auto inst = ProblemInstance(measure({2, 1}, {1, 1}), measure({2, 1}, {0, 2}));
  const auto forced = plan({2, 1}, {2, 1}, {{0, 1, 1}, {1, 1, 1}});
  ASSERT_TRUE(check_marginals(forced, inst));
  // The only feasible integer coupling, so the minimum is its cost.
  EXPECT_EQ(testing::brute_force_min_cost(inst), 1);
  EXPECT_EQ(plan_cost(forced), 1);
}

TEST(TransportPlan, Validation) {
  EXPECT_THROW(plan({2}, {2}, {{0, 0, 0}}), InvalidArgument);
  EXPECT_THROW(plan({2}, {2}, {{0, 2, 1}}), InvalidArgument);
  EXPECT_THROW(plan({2}, {2}, {{0, 1, 1}, {0, 1, 2}}), InvalidArgument);
  const auto p = plan({2}, {2}, {{1, 0, 1}, {0, 1, 2}});
  EXPECT_EQ(p.entries()[0].source, 0);
}

TEST(CheckMarginals, Examples) {
  const auto m = measure({2, 2}, {1, 2, 3, 4});
  const ProblemInstance inst(m, m);
  std::vector<PlanEntry> diag;
  for (std::int64_t i = 0; i < 4; ++i) diag.push_back({i, i, m.mass(i)});
  EXPECT_TRUE(check_marginals(TransportPlan(m.shape(), m.shape(), diag), inst));
  diag[2].mass -= 1;
  EXPECT_FALSE(check_marginals(TransportPlan(m.shape(), m.shape(), diag), inst));
}

TEST(CheckMarginals, OraclePlanOnRandomFiveByFive) {
  std::mt19937_64 rng(5);
  const auto inst = testing::random_square_instance(rng, 5, 0, 20);
  EXPECT_TRUE(check_marginals(oracle_solve(inst).plan, inst));
}

TEST(FullNeighborhood, Sizes) {
  EXPECT_EQ(full_neighborhood(GridShape({2, 2}), GridShape({2, 2})).size(), 16);
  EXPECT_EQ(full_neighborhood(GridShape({1, 1}), GridShape({3, 3})).size(), 9);
  EXPECT_EQ(full_neighborhood(GridShape({4, 4}), GridShape({4, 4})).size(), 256);
}

TEST(Neighborhood, MembershipAndSize) {
  const GridShape s({2, 2});
  const auto full = full_neighborhood(s, s);
  for (std::int64_t x = 0; x < 4; ++x) {
    for (std::int64_t y = 0; y < 4; ++y) EXPECT_TRUE(full.contains(x, y));
  }
  EXPECT_EQ(Neighborhood::from_pairs(s, s, {}).size(), 0);

  // Box [1,2] x [1,1] for source 0 plus one extra.
  std::vector<Interval> boxes(8);
  boxes[0] = {1, 2};
  boxes[1] = {1, 1};
  const Neighborhood n(s, s, boxes, {{0, 3}});
  EXPECT_EQ(n.size(), 3);
  EXPECT_TRUE(n.contains(0, 0));
  EXPECT_TRUE(n.contains(0, 2));
  EXPECT_TRUE(n.contains(0, 3));
  EXPECT_FALSE(n.contains(0, 1));
  EXPECT_FALSE(n.contains(1, 0));
}

TEST(Neighborhood, ExtrasInsideBoxAreDropped) {
  const GridShape s({3});
  std::vector<Interval> boxes{{1, 2}, {}, {}};
  const Neighborhood n(s, s, boxes, {{0, 1}, {0, 2}, {0, 2}});
  EXPECT_EQ(n.extras(0).size(), 1u);
  EXPECT_EQ(n.size(), 3);
}

TEST(Neighborhood, RejectsBoxOutsideTarget) {
  const GridShape s({3});
  EXPECT_THROW(Neighborhood(s, s, {{1, 4}, {}, {}}), InvalidArgument);
  EXPECT_THROW(Neighborhood(s, s, {{0, 2}, {}, {}}), InvalidArgument);
}

TEST(Neighborhood, VisitationOrder) {
  const GridShape src({1, 1});
  const GridShape tgt({3, 3});
  const Neighborhood n(src, tgt, {{2, 3}, {1, 2}}, {{0, 0}, {0, 8}});
  std::vector<std::int64_t> seen;
  n.for_each_pair([&](std::int64_t, std::int64_t t) { seen.push_back(t); });
  // Box rows 2..3, columns 1..2 row-major: 3,4,6,7; then extras ascending.
  EXPECT_EQ(seen, (std::vector<std::int64_t>{3, 4, 6, 7, 0, 8}));
}

// Visited pairs are unique, consistent with contains(), and count to size().
TEST(Neighborhood, VisitationMatchesMembership) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto src = testing::random_shape(rng, 1, 4);
    const auto tgt = GridShape({std::uniform_int_distribution<std::int64_t>(1, 4)(rng),
                                std::uniform_int_distribution<std::int64_t>(1, 4)(rng),
                                std::uniform_int_distribution<std::int64_t>(1, 3)(rng)});
    const GridShape src3({src.extent(0), src.extent(1), 1});
    std::vector<Interval> boxes;
    for (std::int64_t s = 0; s < src3.size(); ++s) {
      for (std::size_t i = 0; i < 3; ++i) {
        std::uniform_int_distribution<std::int32_t> c(1, static_cast<std::int32_t>(tgt.extent(i)));
        const auto a = c(rng);
        const auto b = c(rng);
        boxes.push_back({std::min(a, b), std::max(a, b) - (trial % 7 == 0 ? 1 : 0)});
      }
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> extras;
    std::uniform_int_distribution<std::int64_t> ps(0, src3.size() - 1), pt(0, tgt.size() - 1);
    for (int k = 0; k < 5; ++k) extras.emplace_back(ps(rng), pt(rng));
    const Neighborhood n(src3, tgt, boxes, extras);

    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    std::int64_t count = 0;
    n.for_each_pair([&](std::int64_t s, std::int64_t t) {
      ++count;
      EXPECT_TRUE(seen.emplace(s, t).second);
    });
    EXPECT_EQ(count, n.size());
    for (std::int64_t s = 0; s < src3.size(); ++s) {
      for (std::int64_t t = 0; t < tgt.size(); ++t) {
        EXPECT_EQ(n.contains(s, t), seen.count({s, t}) == 1);
      }
    }
    for (const auto& [s, t] : extras) EXPECT_TRUE(n.contains(s, t));
  }
}

TEST(UnionWithSupport, Examples) {
  const GridShape s({3});
  const Neighborhood n(s, s, {{1, 2}, {2, 3}, {3, 3}});
  EXPECT_EQ(union_with_support(n, plan({3}, {3}, {{0, 1, 4}})), n);
  EXPECT_EQ(union_with_support(n, plan({3}, {3}, {})), n);
  const auto grown = union_with_support(n, plan({3}, {3}, {{2, 0, 1}}));
  EXPECT_TRUE(grown.contains(2, 0));
  EXPECT_EQ(grown.size(), n.size() + 1);
  ASSERT_EQ(grown.extras(2).size(), 1u);
  EXPECT_EQ(grown.extras(2)[0], 0);
}

// Result is exactly n plus the uncovered support pairs.
TEST(UnionWithSupport, SmallestSuperset) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::random_square_instance(rng, 4, 0, 5);
    const auto& s = inst.mu().shape();
    std::vector<Interval> boxes;
    for (std::int64_t x = 0; x < s.size(); ++x) {
      const auto p = s.point_of(x);
      boxes.push_back({static_cast<std::int32_t>(p.coords[0]), static_cast<std::int32_t>(p.coords[0])});
      boxes.push_back({static_cast<std::int32_t>(p.coords[1]), static_cast<std::int32_t>(p.coords[1])});
    }
    const Neighborhood diag(s, s, boxes);
    const auto pl = oracle_solve(inst).plan;
    const auto u = union_with_support(diag, pl);
    std::int64_t uncovered = 0;
    for (const auto& e : pl.entries()) {
      EXPECT_TRUE(u.contains(e.source, e.target));
      if (!diag.contains(e.source, e.target)) ++uncovered;
    }
    EXPECT_EQ(u.size(), diag.size() + uncovered);
  }
}

}  // namespace
}  // namespace gridot
