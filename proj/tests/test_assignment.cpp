#include "oracles.hpp"
#include "sasm/assignment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace sasm;

namespace {

constexpr double kInf = kForbidden<double>;

using oracle::Best;

void expectValid(const Eigen::MatrixXd &c, const Assignment &a) {
  std::vector<char> rows(c.rows(), 0), cols(c.cols(), 0);
  for (const auto &[r, k] : a) {
    ASSERT_TRUE(std::isfinite(c(r, k)));
    ASSERT_FALSE(rows[r]++);
    ASSERT_FALSE(cols[k]++);
  }
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
}

} // namespace

TEST(Hungarian, DiagonalZero) {
  Eigen::Matrix3d c = Eigen::Matrix3d::Ones() - Eigen::Matrix3d::Identity();
  EXPECT_EQ(hungarianAssign(c), (Assignment{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(Hungarian, TwoByTwo) {
  Eigen::Matrix2d c;
  c << 1, 2, 2, 1;
  const auto a = hungarianAssign(c);
  EXPECT_EQ(a, (Assignment{{0, 0}, {1, 1}}));
  EXPECT_EQ(assignmentCost(c, a), 2.0);
}

TEST(Hungarian, EmptyShapes) {
  EXPECT_TRUE(hungarianAssign(Eigen::MatrixXd(0, 4)).empty());
  EXPECT_TRUE(hungarianAssign(Eigen::MatrixXd(3, 0)).empty());
}

TEST(Hungarian, AllForbidden) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(3, 2, kInf);
  EXPECT_TRUE(hungarianAssign(c).empty());
}

TEST(Hungarian, ForbiddenCellsNeverChosen) {
  Eigen::MatrixXd c(2, 2);
  c << 0.0, kInf, kInf, kInf;
  EXPECT_EQ(hungarianAssign(c), (Assignment{{0, 0}}));
}

TEST(Hungarian, PrefersMorePairsOverLowerCost) {
  // (0,0) alone costs 0; the full matching costs 18 but has two pairs.
  Eigen::MatrixXd c(2, 2);
  c << 0.0, 9.0, 9.0, kInf;
  EXPECT_EQ(hungarianAssign(c), (Assignment{{0, 1}, {1, 0}}));
}

TEST(Hungarian, Rectangular) {
  Eigen::MatrixXd tall(3, 2);
  tall << 5, 1, 1, 5, 0, 0;
  const auto a = hungarianAssign(tall);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(assignmentCost(tall, a), oracle::bruteForceAssign(tall).cost);
  EXPECT_EQ(hungarianAssign(Eigen::MatrixXd(tall.transpose())).size(), 2u);
}

TEST(Hungarian, NegativeCosts) {
  Eigen::MatrixXd c(2, 3);
  c << -4, -1, 2, -3, -5, 0;
  EXPECT_EQ(assignmentCost(c, hungarianAssign(c)), -9.0);
}

TEST(Hungarian, RandomFiveByFiveSeed42) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd c(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      c(i, j) = u(rng);
  const auto a = hungarianAssign(c);
  EXPECT_EQ(a.size(), 5u);
  EXPECT_NEAR(assignmentCost(c, a), oracle::bruteForceAssign(c).cost, 1e-12);
}

TEST(HungarianProperty, MatchesExhaustiveOnIntegerMatrices) {
  // Integer costs make the optimum exact, so totals must agree bit for bit.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::MatrixXd c = oracle::randomIntegerMatrix(rng, trial);
    const auto a = hungarianAssign(c);
    expectValid(c, a);
    const Best b = oracle::bruteForceAssign(c);
    ASSERT_EQ(static_cast<int>(a.size()), b.pairs) << "trial " << trial;
    ASSERT_EQ(assignmentCost(c, a), b.cost) << "trial " << trial;
  }
}
