#include <gtest/gtest.h>

#include <random>

#include "depthbench/geometry.h"
#include "depthbench/kdtree.h"
#include "depthbench/pointcloud_metrics.h"
#include "oracle.h"
#include "synthetic.h"

namespace depthbench {
namespace {

TEST(KdTree, SinglePoint) {
  const KdTree tree({Vec3(0, 0, 1)});
  EXPECT_EQ(tree.NearestDistance(Vec3::Zero()), 1.0);
  EXPECT_EQ(tree.NearestIndex(Vec3::Zero()), 0u);
}

TEST(KdTree, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(KdTree(PointCloud{}), Error);
  EXPECT_THROW(KdTree({Vec3(0, std::nan(""), 0)}), Error);
}

TEST(KdTree, MatchesBruteForceBitForBit) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 9u, 100u, 2000u}) {
    const PointCloud cloud = testing::RandomCloud(rng, n, 3.0);
    const KdTree tree(cloud);
    for (const Vec3& q : testing::RandomCloud(rng, 300, 4.0)) {
      ASSERT_EQ(tree.NearestDistance(q), oracle::NearestDistance(cloud, q));
    }
  }
}

TEST(KdTree, DuplicatesAndDegenerateAxes) {
  PointCloud cloud(50, Vec3(1, 1, 1));
  for (int i = 0; i < 50; ++i) cloud.push_back(Vec3(i * 0.1, 0, 0));
  const KdTree tree(cloud);
  std::mt19937_64 rng(2);
  for (const Vec3& q : testing::RandomCloud(rng, 200, 5.0)) {
    ASSERT_EQ(tree.NearestDistance(q), oracle::NearestDistance(cloud, q));
  }
}

TEST(PointcloudMetrics, HandFixtures) {
  const PointcloudMetrics one =
      ComputePointcloudMetrics({Vec3(0, 0, 0)}, {Vec3(1, 0, 0)});
  EXPECT_EQ(one.chamfer, 2.0);
  EXPECT_EQ(one.precision, 0.0);
  EXPECT_EQ(one.f_score, 0.0);
  EXPECT_EQ(one.iou, 0.0);

  EXPECT_EQ(FScore(1.0, 0.5), 2.0 / 3.0);
  EXPECT_EQ(IntersectionOverUnion(1.0, 0.5), 0.5);
  EXPECT_EQ(FScore(0.0, 0.0), 0.0);
}

TEST(PointcloudMetrics, PrecisionRecallFixture) {
  // Every prediction lies on a gt point; half the gt is missed.
  const PointCloud pred = {Vec3(0, 0, 1), Vec3(1, 0, 1)};
  const PointCloud gt = {Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(5, 0, 1), Vec3(6, 0, 1)};
  const PointcloudMetrics m = ComputePointcloudMetrics(pred, gt);
  EXPECT_EQ(m.precision, 100.0);
  EXPECT_EQ(m.recall, 50.0);
  EXPECT_EQ(m.f_score, 100.0 * (2.0 / 3.0));
  EXPECT_EQ(m.iou, 50.0);
}

TEST(PointcloudMetrics, ThresholdIsStrict) {
  const PointcloudMetrics m = ComputePointcloudMetrics({Vec3(0, 0, 0)}, {Vec3(0.5, 0, 0)}, 0.5);
  EXPECT_EQ(m.precision, 0.0);
}

TEST(PointcloudMetrics, MatchesOracle) {
  std::mt19937_64 rng(3);
  const PointCloud a = testing::RandomCloud(rng, 400, 1.0);
  const PointCloud b = testing::RandomCloud(rng, 300, 1.0);
  const PointcloudMetrics m = ComputePointcloudMetrics(a, b, 0.15);
  const oracle::CloudValues o = oracle::CloudMetrics(a, b, 0.15);
  EXPECT_EQ(m.chamfer, o.chamfer);
  EXPECT_EQ(m.precision, 100.0 * o.precision);
  EXPECT_EQ(m.recall, 100.0 * o.recall);
}

TEST(PointcloudMetrics, IdentityIsPerfect) {
  std::mt19937_64 rng(4);
  const PointCloud a = testing::RandomCloud(rng, 100, 1.0);
  const PointcloudMetrics m = ComputePointcloudMetrics(a, a);
  EXPECT_EQ(m.chamfer, 0.0);
  EXPECT_EQ(m.f_score, 100.0);
  EXPECT_EQ(m.iou, 100.0);
}

TEST(PointcloudMetrics, RigidInvariance) {
  std::mt19937_64 rng(5);
  const PointCloud a = testing::RandomCloud(rng, 200, 2.0);
  const PointCloud b = testing::RandomCloud(rng, 150, 2.0);
  const PointcloudMetrics base = ComputePointcloudMetrics(a, b, 0.3);
  for (int i = 0; i < 10; ++i) {
    const RigidTransform T = testing::RandomRigid(rng);
    PointCloud ta, tb;
    for (const Vec3& p : a) ta.push_back(T.Apply(p));
    for (const Vec3& p : b) tb.push_back(T.Apply(p));
    const PointcloudMetrics m = ComputePointcloudMetrics(ta, tb, 0.3);
    EXPECT_NEAR(m.chamfer, base.chamfer, 1e-9);
    EXPECT_NEAR(m.f_score, base.f_score, 1e-9);
  }
}

TEST(PointcloudMetrics, Errors) {
  EXPECT_THROW(ComputePointcloudMetrics({}, {Vec3::Zero()}), Error);
  EXPECT_THROW(ComputePointcloudMetrics({Vec3::Zero()}, {Vec3::Zero()}, 0.0), Error);
}

TEST(PointcloudMetrics, FromDepthMaps) {
  const Intrinsics K = testing::CenteredIntrinsics(12, 8);
  const DepthMap gt = testing::FrontoParallelPlane(12, 8, 5.0);
  const PointcloudMetrics near =
      ComputePointcloudMetrics(Backproject(testing::FrontoParallelPlane(12, 8, 5.05), K),
                               Backproject(gt, K));
  EXPECT_EQ(near.f_score, 100.0);
  const PointcloudMetrics far =
      ComputePointcloudMetrics(Backproject(testing::FrontoParallelPlane(12, 8, 6.0), K),
                               Backproject(gt, K));
  EXPECT_EQ(far.f_score, 0.0);
}

}  // namespace
}  // namespace depthbench
