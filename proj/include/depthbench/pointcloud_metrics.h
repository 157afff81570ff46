#pragma once

#include <filesystem>

#include "depthbench/kdtree.h"
#include "depthbench/types.h"

namespace depthbench {

inline constexpr double kDefaultPointThreshold = 0.1;  // meters

struct PointcloudMetrics {
  double chamfer = 0.0;  // meters
  double precision = 0.0;  // percent
  double recall = 0.0;
  double f_score = 0.0;
  double iou = 0.0;
};

/// Harmonic mean of fractional precision and recall; 0 when both are 0.
double FScore(double precision, double recall);
/// P R / (P + R - P R); 0 when both are 0.
double IntersectionOverUnion(double precision, double recall);

/// Mean nearest-neighbour distance from gt to pred plus from pred to gt.
double Chamfer(const PointCloud& pred, const PointCloud& gt);

/// Fraction of `from` points whose nearest neighbour in `to` is strictly
/// closer than `threshold`.
double FractionWithin(const PointCloud& from, const KdTree& to, double threshold);

/// Chamfer, precision, recall, F-score and IoU. The threshold comparison is
/// strict. Throws on empty clouds or a non-positive threshold.
PointcloudMetrics ComputePointcloudMetrics(
    const PointCloud& pred, const PointCloud& gt,
    double threshold = kDefaultPointThreshold);

/// One "x y z" line per point.
void WriteXyz(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace depthbench
