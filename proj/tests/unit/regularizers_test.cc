#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "depthbench/regularizers.h"
#include "synthetic.h"

namespace depthbench {
namespace {

std::vector<SmoothnessConfig> AllVariants() {
  std::vector<SmoothnessConfig> out;
  for (int order : {1, 2}) {
    for (bool edge_aware : {false, true}) {
      SmoothnessConfig c;
      c.order = order;
      c.edge_aware = edge_aware;
      out.push_back(c);
    }
  }
  return out;
}

DisparityMap RandomDisparity(std::mt19937_64& rng, int w, int h) {
  DisparityMap d(w, h);
  for (double& v : d.values.values()) v = std::uniform_real_distribution<double>(0.01, 1)(rng);
  return d;
}

TEST(Smoothness, ConstantDisparityIsZero) {
  std::mt19937_64 rng(1);
  const Image image = testing::RandomImage(rng, 8, 6, 3);
  for (const SmoothnessConfig& c : AllVariants()) {
    EXPECT_EQ(SmoothnessLoss(DisparityMap(8, 6, 0.3), image, c), 0.0);
  }
}

TEST(Smoothness, InvariantToDisparityScale) {
  std::mt19937_64 rng(2);
  const Image image = testing::RandomImage(rng, 10, 7, 3);
  const DisparityMap d = RandomDisparity(rng, 10, 7);
  for (const SmoothnessConfig& c : AllVariants()) {
    const double base = SmoothnessLoss(d, image, c);
    for (double k : {0.1, 1.0, 10.0}) {
      DisparityMap scaled = d;
      for (double& v : scaled.values.values()) v *= k;
      EXPECT_NEAR(SmoothnessLoss(scaled, image, c), base, 1e-9);
    }
  }
}

TEST(Smoothness, EdgeAwareRampHandValue) {
  const int w = 6, h = 3;
  DisparityMap d(w, h);
  Image image(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      d.values(x, y) = x + 1.0;
      image.at(x, y, 0) = x * std::log(2.0);
    }
  }
  const double mean = 3.5;
  // x term: normalized gradient 1/mean damped by exp(-ln 2); y term: zero.
  EXPECT_NEAR(SmoothnessLoss(d, image), 0.5 * (0.5 / mean), 1e-12);
}

TEST(Smoothness, EdgeAwareNeverExceedsPlain) {
  std::mt19937_64 rng(3);
  for (int order : {1, 2}) {
    const Image image = testing::RandomImage(rng, 9, 9, 3);
    const DisparityMap d = RandomDisparity(rng, 9, 9);
    SmoothnessConfig aware, plain;
    aware.order = plain.order = order;
    plain.edge_aware = false;
    EXPECT_LE(SmoothnessLoss(d, image, aware), SmoothnessLoss(d, image, plain));
  }
}

TEST(Smoothness, TinySigmaConvergesToUnsmoothed) {
  std::mt19937_64 rng(4);
  const Image image = testing::RandomImage(rng, 9, 9, 3);
  const DisparityMap d = RandomDisparity(rng, 9, 9);
  SmoothnessConfig smoothed;
  smoothed.gaussian_sigma = 1e-3;
  EXPECT_NEAR(SmoothnessLoss(d, image, smoothed), SmoothnessLoss(d, image), 1e-6);
}

TEST(Smoothness, ZeroMeanThrows) {
  EXPECT_THROW(SmoothnessLoss(DisparityMap(4, 4, 0.0), Image(4, 4, 1)), Error);
}

TEST(Occlusion, HandValues) {
  EXPECT_EQ(OcclusionLoss(DisparityMap(3, 3, 0.0), OcclusionVariant::kBackground), 0.0);
  EXPECT_EQ(OcclusionLoss(DisparityMap(3, 3, 0.25), OcclusionVariant::kBackground), 0.25);
  EXPECT_EQ(OcclusionLoss(DisparityMap(3, 3, 0.25), OcclusionVariant::kForeground), 0.75);
}

TEST(Occlusion, VariantsSumToOneAndBackgroundIsLinear) {
  std::mt19937_64 rng(5);
  const DisparityMap a = RandomDisparity(rng, 7, 5);
  const DisparityMap b = RandomDisparity(rng, 7, 5);
  EXPECT_NEAR(OcclusionLoss(a, OcclusionVariant::kBackground) +
                  OcclusionLoss(a, OcclusionVariant::kForeground),
              1.0, 1e-15);
  DisparityMap mix(7, 5);
  for (std::size_t i = 0; i < mix.values.size(); ++i) {
    mix.values[i] = 2.0 * a.values[i] + 3.0 * b.values[i];
  }
  EXPECT_NEAR(OcclusionLoss(mix, OcclusionVariant::kBackground),
              2.0 * OcclusionLoss(a, OcclusionVariant::kBackground) +
                  3.0 * OcclusionLoss(b, OcclusionVariant::kBackground),
              1e-12);
}

PredictiveMask Explainability(double v) {
  return {PredictiveMask::Kind::kExplainability, Grid<double>(3, 2, v)};
}

TEST(Explainability, HandValues) {
  EXPECT_EQ(ExplainabilityRegularization(Explainability(1.0)), 0.0);
  EXPECT_NEAR(ExplainabilityRegularization(Explainability(1.0 / std::exp(1.0))), 1.0, 1e-15);
  EXPECT_NEAR(ExplainabilityRegularization(Explainability(0.0)), -std::log(kExplainabilityFloor),
              1e-12);
}

TEST(Explainability, StrictlyDecreasing) {
  double previous = std::numeric_limits<double>::infinity();
  for (double m = 0.05; m <= 1.0; m += 0.05) {
    const double r = ExplainabilityRegularization(Explainability(m));
    EXPECT_LT(r, previous);
    previous = r;
  }
}

TEST(Explainability, RejectsOutOfRange) {
  EXPECT_THROW(ExplainabilityRegularization(Explainability(-0.1)), Error);
  EXPECT_THROW(ExplainabilityRegularization(Explainability(1.1)), Error);
}

}  // namespace
}  // namespace depthbench
