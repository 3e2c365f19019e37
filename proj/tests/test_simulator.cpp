#include "sasm/prng.hpp"
#include "sasm/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sasm;

namespace {

// Reference SplitMix64 written against the published constants, with the
// state kept as a separate Weyl counter.
std::uint64_t referenceSplitMix(std::uint64_t seed, int index) {
  const unsigned __int128 golden = 0x9E3779B97F4A7C15ULL;
  const auto z0 = static_cast<std::uint64_t>((seed + golden * static_cast<unsigned>(index + 1)));
  std::uint64_t z = z0;
  z ^= z >> 30;
  z = static_cast<std::uint64_t>(static_cast<unsigned __int128>(z) * 0xBF58476D1CE4E5B9ULL);
  z ^= z >> 27;
  z = static_cast<std::uint64_t>(static_cast<unsigned __int128>(z) * 0x94D049BB133111EBULL);
  z ^= z >> 31;
  return z;
}

double angleBetween(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

ScenarioConfig quiet() {
  ScenarioConfig c;
  c.n_objects = 1;
  c.noise_sigma = 0.0;
  c.rotation_event_prob = 0.0;
  c.miss_prob_base = 0.0;
  c.miss_prob_occluded = 0.0;
  c.box_jitter = 0.0;
  return c;
}

} // namespace

TEST(SplitMix64, SeedZeroFirstOutput) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(referenceSplitMix(0, 0), 0xE220A8397B1DCDAFULL);
}

TEST(SplitMix64, MatchesReference) {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    SplitMix64 rng(seed);
    for (int i = 0; i < 1000; ++i)
      ASSERT_EQ(rng.next(), referenceSplitMix(seed, i)) << seed << " " << i;
  }
}

TEST(SplitMix64, SameSeedSameStream) {
  SplitMix64 a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.gaussian(), b.gaussian());
  }
}

TEST(SplitMix64, UniformUsesTop53Bits) {
  SplitMix64 a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, std::ldexp(static_cast<double>(b.next() >> 11), -53));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(SplitMix64, GaussianMoments) {
  SplitMix64 rng(3);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    ASSERT_TRUE(std::isfinite(g));
    s += g;
    s2 += g * g;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(SplitMix64, GaussianConsumesTwoDraws) {
  SplitMix64 a(8), b(8);
  a.gaussian();
  b.next();
  b.next();
  EXPECT_EQ(a.state(), b.state());
}

TEST(Simulator, Deterministic) {
  ScenarioConfig c;
  c.n_frames = 120;
  c.seed = 17;
  const Scenario a = generateScenario(c), b = generateScenario(c);
  ASSERT_EQ(a.detections.size(), b.detections.size());
  for (std::size_t f = 0; f < a.detections.size(); ++f) {
    ASSERT_EQ(a.detections[f].size(), b.detections[f].size());
    for (std::size_t i = 0; i < a.detections[f].size(); ++i) {
      EXPECT_EQ(a.detections[f][i].box, b.detections[f][i].box);
      EXPECT_EQ(a.detections[f][i].embedding, b.detections[f][i].embedding);
      EXPECT_EQ(a.detections[f][i].score, b.detections[f][i].score);
    }
    for (std::size_t i = 0; i < a.gt[f].size(); ++i)
      EXPECT_EQ(a.gt[f][i].box, b.gt[f][i].box);
  }
  c.seed = 18;
  EXPECT_NE(generateScenario(c).gt[50][0].box, a.gt[50][0].box);
}

TEST(Simulator, ShapesAndRanges) {
  ScenarioConfig c;
  c.n_frames = 300;
  const Scenario s = generateScenario(c);
  ASSERT_EQ(s.gt.size(), 300u);
  for (std::size_t f = 0; f < s.gt.size(); ++f) {
    ASSERT_EQ(s.gt[f].size(), static_cast<std::size_t>(c.n_objects));
    for (std::size_t i = 0; i < s.gt[f].size(); ++i) {
      const Box2d &b = s.gt[f][i].box;
      EXPECT_EQ(s.gt[f][i].id, static_cast<long>(i) + 1);
      EXPECT_GE(b.left(), -1e-12);
      EXPECT_GE(b.top(), -1e-12);
      EXPECT_LE(b.right(), 1.0 + 1e-12);
      EXPECT_LE(b.bottom(), 1.0 + 1e-12);
      EXPECT_NEAR(s.true_appearance[f][i].norm(), 1.0, 1e-12);
    }
    ASSERT_EQ(s.detections[f].size(), s.detection_source[f].size());
    for (const auto &d : s.detections[f]) {
      EXPECT_TRUE(d.box.valid());
      EXPECT_NEAR(d.embedding.norm(), 1.0, 1e-12);
      EXPECT_GE(d.score, 0.0);
      EXPECT_LE(d.score, 1.0);
    }
  }
}

TEST(Simulator, NoDriftSourcesMeansConstantEmbedding) {
  ScenarioConfig c = quiet();
  c.drift_rate = 0.0;
  const Scenario s = generateScenario(c);
  const Eigen::VectorXd first = s.detections[0][0].embedding;
  for (const auto &frame : s.detections) {
    ASSERT_EQ(frame.size(), 1u);
    EXPECT_EQ(frame[0].embedding, first);
  }
}

TEST(Simulator, DriftAngleEqualsRateTimesDisplacement) {
  ScenarioConfig c = quiet();
  c.drift_rate = std::numbers::pi;
  c.speed_min = c.speed_max = 0.1;
  c.turn_prob = 0.0;
  c.width_min = c.width_max = 0.05;
  const Scenario s = generateScenario(c);
  int fullSteps = 0;
  for (std::size_t f = 1; f < s.gt.size(); ++f) {
    const double d = euclideanDistance(center(s.gt[f][0].box), center(s.gt[f - 1][0].box));
    const double angle = angleBetween(s.true_appearance[f][0], s.true_appearance[f - 1][0]);
    ASSERT_NEAR(angle, c.drift_rate * d, 1e-9) << "frame " << f;
    if (std::abs(d - 0.1) < 1e-12) {
      EXPECT_NEAR(angle, 0.1 * std::numbers::pi, 1e-9);
      ++fullSteps;
    }
  }
  EXPECT_GT(fullSteps, 100);
}

TEST(Simulator, DriftCouplingHoldsForRandomMotion) {
  ScenarioConfig c = quiet();
  c.n_objects = 4;
  c.drift_rate = 2.0;
  c.turn_prob = 0.2;
  c.occlusion_blend = 0.0;
  c.seed = 4;
  const Scenario s = generateScenario(c);
  for (std::size_t f = 1; f < s.gt.size(); ++f)
    for (int i = 0; i < c.n_objects; ++i) {
      const double d = euclideanDistance(center(s.gt[f][i].box), center(s.gt[f - 1][i].box));
      ASSERT_NEAR(angleBetween(s.true_appearance[f][i], s.true_appearance[f - 1][i]),
                  c.drift_rate * d, 1e-9);
    }
}

TEST(Simulator, RotationEventsJumpByMagnitude) {
  ScenarioConfig c = quiet();
  c.drift_rate = 0.0;
  c.rotation_event_prob = 0.05;
  c.rotation_magnitude = 0.7;
  const Scenario s = generateScenario(c);
  int events = 0;
  for (std::size_t f = 1; f < s.gt.size(); ++f) {
    const double a = angleBetween(s.true_appearance[f][0], s.true_appearance[f - 1][0]);
    if (a > 1e-9) {
      EXPECT_NEAR(a, 0.7, 1e-9);
      ++events;
    }
  }
  EXPECT_GT(events, 10);
  EXPECT_LT(events, 45);
}

TEST(Simulator, MissRateWithoutOverlap) {
  ScenarioConfig c = quiet();
  c.miss_prob_base = 0.1;
  c.miss_prob_occluded = 1.0;
  c.n_frames = 10000;
  const Scenario s = generateScenario(c);
  long missed = 0;
  for (const auto &frame : s.detections)
    missed += frame.empty();
  EXPECT_NEAR(static_cast<double>(missed) / 10000.0, c.miss_prob_base, 0.02);
}

TEST(Simulator, OcclusionBlendsTowardOccluder) {
  ScenarioConfig c = quiet();
  c.n_objects = 2;
  c.drift_rate = 0.0;
  c.speed_min = c.speed_max = 0.0;
  c.width_min = c.width_max = 0.98;
  c.aspect_min = c.aspect_max = 1.0;
  c.occlusion_blend = 0.6;
  const Scenario s = generateScenario(c);
  const Eigen::VectorXd &a = s.true_appearance[0][0], &b = s.true_appearance[0][1];
  const double ov = iou(s.gt[0][0].box, s.gt[0][1].box);
  ASSERT_GT(ov, 0.9);
  ASSERT_EQ(s.detections[0].size(), 2u);
  const Eigen::VectorXd expect = ((1.0 - 0.6 * ov) * a + 0.6 * ov * b).normalized();
  EXPECT_TRUE(s.detections[0][0].embedding.isApprox(expect, 1e-12));
}

TEST(Simulator, ValidatesConfig) {
  ScenarioConfig c;
  c.n_objects = 0;
  EXPECT_THROW(generateScenario(c), std::invalid_argument);
  c = {};
  c.occlusion_blend = 1.5;
  EXPECT_THROW(generateScenario(c), std::invalid_argument);
  c = {};
  c.noise_sigma = -1.0;
  EXPECT_THROW(generateScenario(c), std::invalid_argument);
  c = {};
  c.width_max = 0.5;
  c.aspect_max = 3.0;
  EXPECT_THROW(generateScenario(c), std::invalid_argument);
}
