#include "depthbench/pointcloud_metrics.h"

#include <fstream>

namespace depthbench {

namespace {

double MeanNearestDistance(const PointCloud& from, const KdTree& to) {
  double sum = 0.0;
  for (const Vec3& p : from) sum += to.NearestDistance(p);
  return sum / static_cast<double>(from.size());
}

}  // namespace

double FScore(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double IntersectionOverUnion(double precision, double recall) {
  const double denom = precision + recall - precision * recall;
  if (denom == 0.0) return 0.0;
  return precision * recall / denom;
}

double Chamfer(const PointCloud& pred, const PointCloud& gt) {
  Check(!pred.empty() && !gt.empty(), "Chamfer distance requires non-empty clouds");
  const KdTree pred_index(pred);
  const KdTree gt_index(gt);
  return MeanNearestDistance(gt, pred_index) + MeanNearestDistance(pred, gt_index);
}

double FractionWithin(const PointCloud& from, const KdTree& to, double threshold) {
  Check(!from.empty(), "empty point cloud");
  std::size_t hits = 0;
  for (const Vec3& p : from) {
    if (to.NearestDistance(p) < threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(from.size());
}

PointcloudMetrics ComputePointcloudMetrics(const PointCloud& pred,
                                           const PointCloud& gt,
                                           double threshold) {
  Check(!pred.empty() && !gt.empty(), "pointcloud metrics require non-empty clouds");
  Check(threshold > 0.0, "distance threshold must be positive");
  const KdTree pred_index(pred);
  const KdTree gt_index(gt);

  PointcloudMetrics m;
  m.chamfer = MeanNearestDistance(gt, pred_index) + MeanNearestDistance(pred, gt_index);
  const double precision = FractionWithin(pred, gt_index, threshold);
  const double recall = FractionWithin(gt, pred_index, threshold);
  m.precision = 100.0 * precision;
  m.recall = 100.0 * recall;
  m.f_score = 100.0 * FScore(precision, recall);
  m.iou = 100.0 * IntersectionOverUnion(precision, recall);
  return m;
}

void WriteXyz(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path);
  Check(static_cast<bool>(out), "cannot write " + path.string());
  out.precision(9);
  for (const Vec3& p : cloud) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  Check(static_cast<bool>(out), "failed writing " + path.string());
}

}  // namespace depthbench
