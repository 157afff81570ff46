#include <gtest/gtest.h>

#include <cmath>

#include "depthbench/panorama.h"
#include "synthetic.h"

namespace depthbench {
namespace {

PatchSpec SmallSpec() {
  PatchSpec s;
  s.width = 33;
  s.height = 11;
  s.fx = s.fy = 20.0;
  s.cx = 16.0;
  s.cy = 5.0;
  return s;
}

TEST(Equirect, HorizonLongitudes) {
  const Vec2 forward = DirectionToEquirect(Vec3(0, 0, 1), 360, 180);
  EXPECT_DOUBLE_EQ(forward.x(), 180.0);
  EXPECT_DOUBLE_EQ(forward.y(), 90.0);
  EXPECT_DOUBLE_EQ(DirectionToEquirect(Vec3(1, 0, 0), 360, 180).x(), 270.0);
  EXPECT_DOUBLE_EQ(DirectionToEquirect(Vec3(0, -1, 0), 360, 180).y(), 0.0);
}

TEST(Patch, ConstantColourGivesConstantPatch) {
  Panorama pano = testing::ConstantRangePanorama(30, 5.0);
  for (double& v : pano.image.values()) v = 0.3;
  const Patch p = SamplePatch(pano, SmallSpec());
  for (double v : p.image.values()) EXPECT_NEAR(v, 0.3, 1e-15);
}

TEST(Patch, RadialToPlanarDepth) {
  const double r = 7.0;
  const PatchSpec spec = SmallSpec();
  const Patch p = SamplePatch(testing::ConstantRangePanorama(40, r), spec);
  EXPECT_EQ(CountTrue(p.depth.valid), static_cast<std::size_t>(spec.width * spec.height));
  EXPECT_NEAR(p.depth.depth(16, 5), r, 1e-12);
  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u) {
      const Vec3 ray((u - spec.cx) / spec.fx, (v - spec.cy) / spec.fy, 1.0);
      EXPECT_NEAR(p.depth.depth(u, v), r * (1.0 / ray.norm()), 1e-9);
    }
  }
}

TEST(Patch, PlanarModeKeepsStoredValue) {
  PatchSpec spec = SmallSpec();
  spec.radial_depth = false;
  const Patch p = SamplePatch(testing::ConstantRangePanorama(40, 3.0), spec);
  for (double v : p.depth.depth.values()) EXPECT_EQ(v, 3.0);
}

TEST(Patch, AzimuthIsPeriodic) {
  const Panorama pano = testing::ConstantRangePanorama(30, 5.0);
  PatchSpec a = SmallSpec(), b = SmallSpec();
  a.azimuth = 40;
  b.azimuth = 400;
  const Patch pa = SamplePatch(pano, a), pb = SamplePatch(pano, b);
  for (std::size_t i = 0; i < pa.image.values().size(); ++i) {
    EXPECT_NEAR(pa.image.values()[i], pb.image.values()[i], 1e-9);
  }
}

TEST(Patch, DropoutPropagates) {
  Panorama pano = testing::ConstantRangePanorama(36, 5.0);
  for (int y = 0; y < 36; ++y) {
    for (int x = 30; x < 40; ++x) pano.depth.valid(x, y) = 0;
  }
  PatchSpec spec = SmallSpec();
  spec.azimuth = 0;
  const Patch p = SamplePatch(pano, spec);
  const std::size_t valid = CountTrue(p.depth.valid);
  EXPECT_GT(valid, 0u);
  EXPECT_LT(valid, static_cast<std::size_t>(spec.width * spec.height));
}

TEST(ScenePatches, Counts) {
  const Panorama pano = testing::ConstantRangePanorama(18, 2.0);
  EXPECT_EQ(GenerateScenePatches(pano, 20, SmallSpec()).size(), 18u);
  EXPECT_EQ(GenerateScenePatches(pano, 90, SmallSpec()).size(), 4u);
  const auto one = GenerateScenePatches(pano, 360, SmallSpec());
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].image, SamplePatch(pano, SmallSpec()).image);
  EXPECT_THROW(GenerateScenePatches(pano, 7, SmallSpec()), Error);
}

TEST(ScenePatches, HorizonRowMapsToPanoramaMiddle) {
  const PatchSpec spec = SmallSpec();
  for (int u = 0; u < spec.width; ++u) {
    const Vec3 ray = Vec3((u - spec.cx) / spec.fx, 0.0, 1.0).normalized();
    EXPECT_EQ(DirectionToEquirect(PatchRotation(20 * u, 0) * ray, 720, 360).y(), 180.0);
  }
}

TEST(Panorama, ValidatesAspect) {
  Panorama bad{Image(30, 20, 1), DepthMap(30, 20)};
  EXPECT_THROW(bad.Validate(), Error);
}

}  // namespace
}  // namespace depthbench
