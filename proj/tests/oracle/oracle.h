#pragma once

#include <vector>

#include "depthbench/geometry.h"
#include "depthbench/types.h"

// Deliberately naive reference implementations. Nothing here calls the
// engine's metric, index, transform or warp code.
namespace depthbench::oracle {

struct ImageMetricValues {
  double mae, rmse, inv_mae, inv_rmse, log_mae, log_rmse, log_si;
  double abs_rel, sq_rel, sq_rel_legacy, delta1, delta2, delta3;
};

/// One scalar loop per metric over paired pixel values.
ImageMetricValues ImageMetrics(const std::vector<double>& pred, const std::vector<double>& gt);

/// Minimum over every point of the Euclidean distance to `query`.
double NearestDistance(const PointCloud& cloud, const Vec3& query);

/// O(N^2) Chamfer, precision and recall (fractions) with a strict threshold.
struct CloudValues {
  double chamfer, precision, recall;
};
CloudValues CloudMetrics(const PointCloud& pred, const PointCloud& gt, double threshold);

/// Per-pixel minimum over all edge pixels, clamped at `truncation`.
Grid<double> TruncatedEdt(const Mask& edges, double truncation);

/// Mean of the truncated distance from each `from` pixel to the nearest `to`
/// pixel; `truncation` when `from` is empty.
double EdgeDistance(const Mask& from, const Mask& to, double truncation);

/// Renders the support view into the target frame for a target-frame plane
/// n.X = offset via the plane-induced homography K (R + t n^T / offset) K^-1.
struct Warped {
  Image image;
  Mask valid;
};
Warped PlanarHomographyWarp(const Image& support, const Intrinsics& K,
                            const RigidTransform& T, const Vec3& normal, double offset);

}  // namespace depthbench::oracle
