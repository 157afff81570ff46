#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "depthbench/types.h"

namespace depthbench {

/// Euclidean distance with a fixed evaluation order. Every distance the
/// pointcloud metrics report goes through this function.
inline double PointDistance(const Vec3& a, const Vec3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Exact nearest-neighbour index over a 3D point set (median-split k-d tree).
/// Immutable after construction and safe for concurrent queries.
class KdTree {
 public:
  /// Throws on an empty cloud.
  explicit KdTree(PointCloud points);

  std::size_t size() const { return points_.size(); }

  /// Distance to the closest indexed point. Identical to the minimum of
  /// PointDistance over all points.
  double NearestDistance(const Vec3& query) const;

  /// Index (into the constructor's cloud) of a closest point.
  std::size_t NearestIndex(const Vec3& query) const;

 private:
  struct Node {
    // Leaf when axis < 0; then [begin, end) indexes order_.
    int axis = -1;
    double split = 0.0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t Build(std::uint32_t begin, std::uint32_t end);
  void Search(std::int32_t node, const Vec3& query, double& best_sq,
              std::uint32_t& best_index) const;

  PointCloud points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace depthbench
