#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "depthbench/photometric.h"
#include "synthetic.h"

namespace depthbench {
namespace {

constexpr double kC1 = 1e-4;

LossMap ConstantLoss(int w, int h, double v) {
  LossMap l(w, h);
  for (double& x : l.values.values()) x = v;
  return l;
}

TEST(Ssim, IdenticalImagesScoreOne) {
  std::mt19937_64 rng(1);
  const Image a = testing::RandomImage(rng, 9, 7, 3);
  const Image s = Ssim(a, a);
  for (double v : s.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Ssim, Symmetric) {
  std::mt19937_64 rng(2);
  const Image a = testing::RandomImage(rng, 9, 7, 2);
  const Image b = testing::RandomImage(rng, 9, 7, 2);
  EXPECT_EQ(Ssim(a, b), Ssim(b, a));
}

TEST(Ssim, ConstantImagesClosedForm) {
  const Image a(5, 5, 1, 0.0), b(5, 5, 1, 1.0);
  const Image s = Ssim(a, b);
  for (double v : s.values()) EXPECT_NEAR(v, kC1 / (1.0 + kC1), 1e-12);
}

TEST(Ssim, ShapeMismatchThrows) {
  EXPECT_THROW(Ssim(Image(3, 3, 1), Image(3, 4, 1)), Error);
}

TEST(PhotometricLoss, ZeroForIdenticalImages) {
  std::mt19937_64 rng(3);
  const Image a = testing::RandomImage(rng, 10, 6, 3);
  const LossMap loss = PhotometricLoss(a, a);
  for (double v : loss.values.values()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(PhotometricLoss, AlphaZeroIsChannelMeanAbsoluteDifference) {
  std::mt19937_64 rng(4);
  const Image a = testing::RandomImage(rng, 6, 5, 3);
  const Image b = testing::RandomImage(rng, 6, 5, 3);
  PhotometricConfig config;
  config.ssim_weight = 0.0;
  const LossMap l = PhotometricLoss(a, b, config);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 6; ++x) {
      double expected = 0.0;
      for (int c = 0; c < 3; ++c) expected += std::abs(a.at(x, y, c) - b.at(x, y, c)) / 3.0;
      EXPECT_NEAR(l.values(x, y), expected, 1e-12);
    }
  }
}

TEST(PhotometricLoss, AlphaOneOnConstantImages) {
  PhotometricConfig config;
  config.ssim_weight = 1.0;
  const Image a(4, 4, 1, 0.5), b(4, 4, 1, 0.6);
  const double c1 = config.ssim_c1;
  const double ssim = (2 * 0.5 * 0.6 + c1) / (0.25 + 0.36 + c1);
  const LossMap loss = PhotometricLoss(a, b, config);
  for (double v : loss.values.values()) {
    EXPECT_NEAR(v, (1 - ssim) / 2, 1e-12);
  }
}

TEST(PhotometricLoss, SymmetricAndNonNegative) {
  std::mt19937_64 rng(5);
  for (double alpha : {0.0, 0.5, 0.85, 1.0}) {
    PhotometricConfig config;
    config.ssim_weight = alpha;
    const Image a = testing::RandomImage(rng, 7, 7, 3);
    const Image b = testing::RandomImage(rng, 7, 7, 3);
    const LossMap ab = PhotometricLoss(a, b, config);
    const LossMap ba = PhotometricLoss(b, a, config);
    for (std::size_t i = 0; i < ab.values.size(); ++i) {
      EXPECT_NEAR(ab.values[i], ba.values[i], 1e-15);
      EXPECT_GE(ab.values[i], 0.0);
    }
  }
}

TEST(PhotometricLoss, ValidityFollowsSynthesisMask) {
  const Image a(3, 3, 1, 0.2);
  Mask valid(3, 3, 1);
  valid(1, 1) = 0;
  EXPECT_EQ(PhotometricLoss(a, a, {}, &valid).valid, valid);
}

TEST(Aggregate, SingleSourceIsUnchanged) {
  std::mt19937_64 rng(6);
  LossMap l(4, 4);
  for (double& v : l.values.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
  const std::vector<LossMap> one = {l};
  for (Reduction mode : {Reduction::kAverage, Reduction::kMinimum}) {
    EXPECT_EQ(AggregateReconstruction(one, mode).loss.values, l.values);
  }
}

TEST(Aggregate, HandValues) {
  const std::vector<LossMap> pair = {ConstantLoss(1, 1, 2.0), ConstantLoss(1, 1, 4.0)};
  const AggregatedLoss min = AggregateReconstruction(pair, Reduction::kMinimum);
  EXPECT_EQ(min.loss.values[0], 2.0);
  EXPECT_EQ(min.source[0], 0);
  EXPECT_EQ(AggregateReconstruction(pair, Reduction::kAverage).loss.values[0], 3.0);
}

TEST(Aggregate, InvalidSourcesAreSkipped) {
  std::vector<LossMap> pair = {ConstantLoss(1, 1, 1.0), ConstantLoss(1, 1, 4.0)};
  pair[0].valid[0] = 0;
  EXPECT_EQ(AggregateReconstruction(pair, Reduction::kMinimum).loss.values[0], 4.0);
  EXPECT_EQ(AggregateReconstruction(pair, Reduction::kAverage).loss.values[0], 4.0);
  pair[1].valid[0] = 0;
  EXPECT_FALSE(AggregateReconstruction(pair, Reduction::kMinimum).loss.valid[0]);
}

TEST(Aggregate, EmptyListThrows) {
  EXPECT_THROW(AggregateReconstruction({}, Reduction::kMinimum), Error);
}

TEST(Automask, HandCases) {
  const std::vector<LossMap> synth = {ConstantLoss(1, 1, 1.0)};
  EXPECT_TRUE(StaticAutomask(synth, std::vector<LossMap>{ConstantLoss(1, 1, 2.0)})[0]);
  EXPECT_FALSE(StaticAutomask(synth, std::vector<LossMap>{ConstantLoss(1, 1, 1.0)})[0]);
  EXPECT_FALSE(StaticAutomask(synth, std::vector<LossMap>{ConstantLoss(1, 1, 0.0)})[0]);
}

TEST(Automask, ListMismatchThrows) {
  const std::vector<LossMap> synth = {ConstantLoss(2, 2, 1.0)};
  EXPECT_THROW(StaticAutomask(synth, std::vector<LossMap>{ConstantLoss(3, 2, 1.0)}), Error);
}

TEST(PredictiveMask, HandExamples) {
  const LossMap l = ConstantLoss(2, 2, 2.0);
  PredictiveMask ones{PredictiveMask::Kind::kExplainability, Grid<double>(2, 2, 1.0)};
  EXPECT_EQ(ApplyPredictiveMask(l, ones).values, l.values);
  PredictiveMask zero{PredictiveMask::Kind::kUncertainty, Grid<double>(2, 2, 0.0)};
  EXPECT_EQ(ApplyPredictiveMask(l, zero).values, l.values);
  PredictiveMask ln2{PredictiveMask::Kind::kUncertainty, Grid<double>(2, 2, std::log(2.0))};
  EXPECT_NEAR(ApplyPredictiveMask(l, ln2).values[0], 1.0 + std::log(2.0), 1e-12);
  PredictiveMask bad{PredictiveMask::Kind::kExplainability, Grid<double>(2, 2, 1.5)};
  EXPECT_THROW(ApplyPredictiveMask(l, bad), Error);
}

TEST(PredictiveMask, UncertaintyMinimisedAtLogLoss) {
  for (double L : {1.5, 3.0, 10.0}) {
    const LossMap l = ConstantLoss(1, 1, L);
    auto at = [&](double m) {
      return ApplyPredictiveMask(l, {PredictiveMask::Kind::kUncertainty, Grid<double>(1, 1, m)})
          .values[0];
    };
    const double best = at(std::log(L));
    for (double dm : {-0.1, -0.01, 0.01, 0.1}) EXPECT_GT(at(std::log(L) + dm), best);
  }
}

TEST(FeatureLoss, IdentityWarpOfIdenticalFeaturesIsZero) {
  std::mt19937_64 rng(8);
  const Image f = testing::RandomImage(rng, 6, 6, 4);
  const std::vector<Image> support = {f};
  const std::vector<WarpField> warps = {WarpField::Identity(6, 6)};
  EXPECT_NEAR(FeatureReconstructionLoss(f, support, warps, FeatureDistance::kL2), 0.0, 1e-12);
  EXPECT_NEAR(FeatureReconstructionLoss(f, support, warps, FeatureDistance::kPhotometric), 0.0,
              1e-12);
}

TEST(FeatureLoss, ConstantDifferenceL2) {
  const std::vector<Image> support = {Image(5, 5, 1, 0.75)};
  const std::vector<WarpField> warps = {WarpField::Identity(5, 5)};
  EXPECT_NEAR(
      FeatureReconstructionLoss(Image(5, 5, 1, 0.25), support, warps, FeatureDistance::kL2),
      0.5, 1e-12);
}

TEST(FeatureLoss, ChannelPermutationInvariant) {
  std::mt19937_64 rng(9);
  const Image t = testing::RandomImage(rng, 6, 5, 3);
  const Image s = testing::RandomImage(rng, 6, 5, 3);
  auto permute = [](const Image& im) {
    Image out(im.width(), im.height(), 3);
    for (int c = 0; c < 3; ++c) out.SetChannel(c, im.Channel((c + 1) % 3));
    return out;
  };
  const std::vector<WarpField> warps = {WarpField::Identity(6, 5)};
  for (FeatureDistance d : {FeatureDistance::kL2, FeatureDistance::kPhotometric}) {
    const double a = FeatureReconstructionLoss(t, std::vector<Image>{s}, warps, d);
    const double b =
        FeatureReconstructionLoss(permute(t), std::vector<Image>{permute(s)}, warps, d);
    EXPECT_NEAR(a, b, 1e-12);
  }
}

TEST(FeatureLoss, ChannelMismatchThrows) {
  const std::vector<Image> support = {Image(4, 4, 2)};
  const std::vector<WarpField> warps = {WarpField::Identity(4, 4)};
  EXPECT_THROW(FeatureReconstructionLoss(Image(4, 4, 3), support, warps, FeatureDistance::kL2),
               Error);
}

TEST(MultiScale, Properties) {
  auto mean = [](const DisparityMap& d) {
    double s = 0.0;
    for (double v : d.values.values()) s += v;
    return s / d.values.size();
  };
  std::mt19937_64 rng(10);
  DisparityMap full(8, 8);
  for (double& v : full.values.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);

  const std::vector<DisparityMap> one = {full};
  EXPECT_EQ(MultiScaleLoss(one, 8, 8, mean).total, mean(full));
  const std::vector<DisparityMap> two = {full, full};
  EXPECT_EQ(MultiScaleLoss(two, 8, 8, mean).total, mean(full));

  const std::vector<DisparityMap> scales = {DisparityMap(8, 8, 1.0), DisparityMap(4, 4, 3.0)};
  const MultiScaleResult r = MultiScaleLoss(scales, 8, 8, mean);
  EXPECT_NEAR(r.total, 2.0, 1e-12);
  ASSERT_EQ(r.per_scale.size(), 2u);
  EXPECT_NEAR(r.per_scale[1], 3.0, 1e-12);

  const std::vector<DisparityMap> odd = {DisparityMap(3, 3, 1.0)};
  EXPECT_THROW(MultiScaleLoss(odd, 8, 8, mean), Error);
}

TEST(Upsample, ConstantStaysConstant) {
  const Grid<double> up = UpsampleBilinear(Grid<double>(3, 2, 0.4), 12, 8);
  for (double v : up.values()) EXPECT_NEAR(v, 0.4, 1e-15);
}

}  // namespace
}  // namespace depthbench
