#include <gtest/gtest.h>

#include <random>

#include "gridot/errors.hpp"
#include "gridot/grid.hpp"
#include "gridot/oracle.hpp"
#include "support/instances.hpp"

namespace gridot {
namespace {

using testing::measure;

TEST(SqEuclideanCost, Examples) {
  EXPECT_EQ(sq_euclidean_cost(GridPoint{{1, 1}}, GridPoint{{3, 2}}), 5);
  EXPECT_EQ(sq_euclidean_cost(GridPoint{{4, 7}}, GridPoint{{4, 7}}), 0);
  EXPECT_EQ(sq_euclidean_cost(GridPoint{{1}}, GridPoint{{4}}), 9);
}

TEST(SqEuclideanCost, RankMismatchThrows) {
  EXPECT_THROW(sq_euclidean_cost(GridPoint{{1, 2}}, GridPoint{{1}}), InvalidArgument);
}

TEST(SqEuclideanCost, SymmetricAndZeroOnlyOnDiagonal) {
  const GridShape shape({4, 3});
  for (std::int64_t a = 0; a < shape.size(); ++a) {
    for (std::int64_t b = 0; b < shape.size(); ++b) {
      const auto x = shape.point_of(a);
      const auto y = shape.point_of(b);
      const auto c = sq_euclidean_cost(x, y);
      EXPECT_EQ(c, sq_euclidean_cost(y, x));
      EXPECT_GE(c, 0);
      EXPECT_EQ(c == 0, a == b);
    }
  }
}

TEST(GridShape, FlatIndexExamples) {
  const GridShape s({4, 4});
  EXPECT_EQ(s.flat_index(GridPoint{{1, 1}}), 0);
  EXPECT_EQ(s.flat_index(GridPoint{{2, 3}}), 6);
  EXPECT_EQ(s.point_of(15), (GridPoint{{4, 4}}));
}

TEST(GridShape, RoundTripExhaustive) {
  for (const auto& dims : std::vector<std::vector<std::int64_t>>{{5}, {3, 4}, {2, 3, 4}}) {
    const GridShape s(dims);
    for (std::int64_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(s.flat_index(s.point_of(i)), i);
    }
  }
}

TEST(GridShape, RejectsBadInput) {
  EXPECT_THROW(GridShape(std::vector<std::int64_t>{}), InvalidArgument);
  EXPECT_THROW(GridShape({3, 0}), InvalidArgument);
  EXPECT_THROW(GridShape({1LL << 40, 1LL << 40}), OverflowError);
  const GridShape s({4, 4});
  EXPECT_THROW(s.point_of(16), InvalidArgument);
  EXPECT_THROW(s.point_of(-1), InvalidArgument);
  EXPECT_THROW(s.flat_index(GridPoint{{5, 1}}), InvalidArgument);
  EXPECT_THROW(s.flat_index(GridPoint{{0, 1}}), InvalidArgument);
  EXPECT_THROW(s.flat_index(GridPoint{{1}}), InvalidArgument);
}

TEST(CoordinateTable, MatchesPointOf) {
  const GridShape s({3, 5});
  const CoordinateTable table(s);
  for (std::int64_t i = 0; i < s.size(); ++i) {
    const auto p = s.point_of(i);
    ASSERT_EQ(table[i].size(), 2u);
    EXPECT_EQ(table[i][0], p.coords[0]);
    EXPECT_EQ(table[i][1], p.coords[1]);
  }
}

TEST(DiscreteMeasure, Validation) {
  EXPECT_THROW(measure({2}, {1}), InvalidArgument);
  EXPECT_THROW(measure({2}, {1, -1}), InvalidArgument);
  EXPECT_THROW(measure({2}, {0, 0}), InvalidArgument);
  const Mass big = std::numeric_limits<Mass>::max() / 2 + 1;
  EXPECT_THROW(measure({2}, {big, big}), OverflowError);
  EXPECT_EQ(measure({3}, {0, 2, 0}).total(), 2);
}

TEST(IncrementAll, Examples) {
  EXPECT_EQ(increment_all(measure({3}, {0, 2, 0})), measure({3}, {1, 3, 1}));
  EXPECT_EQ(increment_all(measure({1}, {5})), measure({1}, {6}));
  EXPECT_EQ(increment_all(measure({2, 2}, {1, 1, 1, 1})), measure({2, 2}, {2, 2, 2, 2}));
}

TEST(IncrementAll, OverflowThrows) {
  const Mass big = std::numeric_limits<Mass>::max() - 1;
  EXPECT_THROW(increment_all(measure({2}, {big, 0})), OverflowError);
}

TEST(Balance, Examples) {
  {
    const auto inst = balance(measure({1}, {3}), measure({1}, {5}));
    EXPECT_EQ(inst.mu().total(), 15);
    EXPECT_EQ(inst.nu().total(), 15);
    EXPECT_EQ(inst.mu().mass(0), 15);
  }
  {
    const auto mu = measure({2}, {4, 6});
    const auto nu = measure({2}, {7, 3});
    const auto inst = balance(mu, nu);
    EXPECT_EQ(inst.mu(), mu);
    EXPECT_EQ(inst.nu(), nu);
  }
  {
    const auto inst = balance(measure({2}, {1, 3}), measure({3}, {2, 2, 2}));
    EXPECT_EQ(inst.total(), 12);
    EXPECT_EQ(inst.mu(), measure({2}, {3, 9}));
    EXPECT_EQ(inst.nu(), measure({3}, {4, 4, 4}));
  }
}

TEST(Balance, Idempotent) {
  const auto once = balance(measure({2}, {1, 3}), measure({3}, {2, 2, 2}));
  const auto twice = balance(once.mu(), once.nu());
  EXPECT_EQ(once.mu(), twice.mu());
  EXPECT_EQ(once.nu(), twice.nu());
}

TEST(Balance, Errors) {
  EXPECT_THROW(balance(measure({1}, {1}), measure({1, 1}, {1})), InvalidArgument);
  const Mass big = (1LL << 40) + 1;
  EXPECT_THROW(balance(measure({1}, {big}), measure({1}, {big - 1})), OverflowError);
}

TEST(ProblemInstance, RejectsUnbalanced) {
  EXPECT_THROW(ProblemInstance(measure({1}, {1}), measure({1}, {2})), InvalidArgument);
}

// Multiplying both measures by k multiplies the optimal cost by k.
TEST(Balance, ScalingMultipliesOptimalCost) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = testing::random_instance(rng, 4, 0, 6);
    for (const Mass k : {2, 3, 7}) {
      const ProblemInstance scaled(scale(inst.mu(), k), scale(inst.nu(), k));
      EXPECT_EQ(oracle_solve(scaled).cost, k * oracle_solve(inst).cost);
    }
  }
}

TEST(Int128, ToString) {
  EXPECT_EQ(to_string(Int128{0}), "0");
  EXPECT_EQ(to_string(Int128{-42}), "-42");
  const Int128 big = static_cast<Int128>(1) << 100;
  EXPECT_EQ(to_string(big), "1267650600228229401496703205376");
}

}  // namespace
}  // namespace gridot
