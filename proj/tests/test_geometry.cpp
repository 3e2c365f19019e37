#include "sasm/geometry.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace sasm;

TEST(Geometry, CenterReturnsStoredCenter) {
  EXPECT_EQ(center(Box2d{0.5, 0.5, 0.2, 0.4}), Point2d(0.5, 0.5));
  EXPECT_EQ(center(Box2d{0.0, 1.0, 0.1, 0.1}), Point2d(0.0, 1.0));
  EXPECT_EQ(center(Box2d{0.25, 0.75, 0.5, 0.5}), Point2d(0.25, 0.75));
}

TEST(Geometry, EuclideanDistance) {
  EXPECT_DOUBLE_EQ(euclideanDistance(Point2d(0.5, 0.5), Point2d(0.5, 0.5)), 0.0);
  EXPECT_DOUBLE_EQ(euclideanDistance(Point2d(0.0, 0.0), Point2d(0.3, 0.4)), 0.5);
  EXPECT_NEAR(euclideanDistance(Point2d(0.1, 0.2), Point2d(0.4, 0.6)), 0.5, 1e-12);
}

TEST(Geometry, IouKnownValues) {
  const Box2d a{0.5, 0.5, 1, 1};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(iou(a, Box2d{1.0, 0.5, 1, 1}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(iou(Box2d{0.2, 0.2, 0.1, 0.1}, Box2d{0.8, 0.8, 0.1, 0.1}), 0.0);
  // touching edges share no area
  EXPECT_DOUBLE_EQ(iou(Box2d{0.5, 0.5, 1, 1}, Box2d{1.5, 0.5, 1, 1}), 0.0);
}

TEST(Geometry, IouFloatInstantiation) {
  EXPECT_FLOAT_EQ(iou(Box2f{0.5f, 0.5f, 1, 1}, Box2f{1.0f, 0.5f, 1, 1}), 1.0f / 3.0f);
}

TEST(Geometry, FromCornersRoundTrip) {
  const Box2d b = Box2d::fromCorners(0.1, 0.2, 0.4, 0.8);
  EXPECT_DOUBLE_EQ(b.cx, 0.25);
  EXPECT_DOUBLE_EQ(b.cy, 0.5);
  EXPECT_NEAR(b.w, 0.3, 1e-15);
  EXPECT_NEAR(b.h, 0.6, 1e-15);
  EXPECT_NEAR(b.left(), 0.1, 1e-15);
  EXPECT_NEAR(b.bottom(), 0.8, 1e-15);
}

TEST(Geometry, CheckBoxRejectsDegenerate) {
  EXPECT_NO_THROW(checkBox(Box2d{0.5, 0.5, 0.1, 0.1}));
  EXPECT_THROW(checkBox(Box2d{0.5, 0.5, 0.0, 0.1}), std::invalid_argument);
  EXPECT_THROW(checkBox(Box2d{0.5, 0.5, 0.1, -1.0}), std::invalid_argument);
  EXPECT_THROW(checkBox(Box2d{std::nan(""), 0.5, 0.1, 0.1}), std::invalid_argument);
}

TEST(Geometry, MaxIouVsOthers) {
  const std::vector<Box2d> single{{0.5, 0.5, 1, 1}};
  EXPECT_DOUBLE_EQ(maxIouVsOthers<double>(0, single), 0.0);
  EXPECT_EQ(argmaxIouVsOthers<double>(0, single), -1);

  const std::vector<Box2d> twins{{0.5, 0.5, 1, 1}, {0.5, 0.5, 1, 1}};
  EXPECT_DOUBLE_EQ(maxIouVsOthers<double>(0, twins), 1.0);

  const std::vector<Box2d> three{{0.5, 0.5, 1, 1}, {1.0, 0.5, 1, 1}, {5, 5, 1, 1}};
  EXPECT_DOUBLE_EQ(maxIouVsOthers<double>(0, three), 1.0 / 3.0);
  EXPECT_EQ(argmaxIouVsOthers<double>(0, three), 1);
  EXPECT_DOUBLE_EQ(maxIouVsOthers<double>(2, three), 0.0);
  EXPECT_THROW(maxIouVsOthers<double>(3, three), std::out_of_range);
}

namespace {

Box2d randomBox(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> pos(0.0, 1.0), size(0.01, 0.6);
  return {pos(rng), pos(rng), size(rng), size(rng)};
}

// Intersection and union counted on a fine grid; independent of the corner math.
double rasterIou(const Box2d &a, const Box2d &b, int n) {
  long inter = 0, uni = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -0.5 + 2.0 * (i + 0.5) / n;
      const double y = -0.5 + 2.0 * (j + 0.5) / n;
      auto inside = [&](const Box2d &b) {
        return x >= b.left() && x < b.right() && y >= b.top() && y < b.bottom();
      };
      const bool ia = inside(a), ib = inside(b);
      inter += ia && ib;
      uni += ia || ib;
    }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace

TEST(GeometryProperty, IouBoundedSymmetricAndSelfOne) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const Box2d a = randomBox(rng), b = randomBox(rng);
    const double v = iou(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_EQ(v, iou(b, a));
    EXPECT_NEAR(iou(a, a), 1.0, 1e-12);
  }
}

TEST(GeometryProperty, IouTranslationAndScaleInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> shift(-3.0, 3.0), scale(0.2, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Box2d a = randomBox(rng), b = randomBox(rng);
    const double dx = shift(rng), dy = shift(rng), s = scale(rng);
    auto move = [&](Box2d x) {
      return Box2d{(x.cx + dx) * s, (x.cy + dy) * s, x.w * s, x.h * s};
    };
    EXPECT_NEAR(iou(move(a), move(b)), iou(a, b), 1e-9);
  }
}

TEST(GeometryProperty, IouMatchesRasterOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    const Box2d a = randomBox(rng), b = randomBox(rng);
    EXPECT_NEAR(iou(a, b), rasterIou(a, b, 800), 0.01);
  }
}

TEST(GeometryProperty, DistanceIsAMetric) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Point2d a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
    EXPECT_EQ(euclideanDistance(a, b), euclideanDistance(b, a));
    EXPECT_GE(euclideanDistance(a, b), 0.0);
    EXPECT_LE(euclideanDistance(a, c), euclideanDistance(a, b) + euclideanDistance(b, c) + 1e-15);
  }
}
