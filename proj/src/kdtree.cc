#include "depthbench/kdtree.h"

#include <algorithm>
#include <limits>
#include <numeric>

namespace depthbench {

namespace {

constexpr std::uint32_t kLeafSize = 8;

double SquaredDistance(const Vec3& a, const Vec3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

KdTree::KdTree(PointCloud points) : points_(std::move(points)) {
  Check(!points_.empty(), "cannot index an empty point cloud");
  Check(points_.size() < std::numeric_limits<std::uint32_t>::max(),
        "point cloud too large to index");
  for (const Vec3& p : points_) {
    Check(p.allFinite(), "point cloud contains non-finite coordinates");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / kLeafSize + 1);
  root_ = Build(0, static_cast<std::uint32_t>(order_.size()));
}

std::int32_t KdTree::Build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{-1, 0.0, begin, end, -1, -1});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] == lo[axis]) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                     return points_[a][axis] < points_[b][axis];
                   });
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double split = points_[order_[mid]][axis];
  const std::int32_t left = Build(begin, mid);
  const std::int32_t right = Build(mid, end);
  Node& node = nodes_[id];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void KdTree::Search(std::int32_t id, const Vec3& query, double& best_sq,
                    std::uint32_t& best_index) const {
  const Node& node = nodes_[id];
  if (node.axis < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const double d = SquaredDistance(query, points_[order_[i]]);
      if (d < best_sq) {
        best_sq = d;
        best_index = order_[i];
      }
    }
    return;
  }
  const double diff = query[node.axis] - node.split;
  const std::int32_t near = diff <= 0.0 ? node.left : node.right;
  const std::int32_t far = diff <= 0.0 ? node.right : node.left;
  Search(near, query, best_sq, best_index);
  // Every far-side point is at least |diff| away along this axis.
  if (diff * diff < best_sq) Search(far, query, best_sq, best_index);
}

double KdTree::NearestDistance(const Vec3& query) const {
  double best_sq = std::numeric_limits<double>::infinity();
  std::uint32_t best_index = 0;
  Search(root_, query, best_sq, best_index);
  // sqrt is correctly rounded and monotone, so this equals the minimum of the
  // per-point distances.
  return std::sqrt(best_sq);
}

std::size_t KdTree::NearestIndex(const Vec3& query) const {
  double best_sq = std::numeric_limits<double>::infinity();
  std::uint32_t best_index = 0;
  Search(root_, query, best_sq, best_index);
  return best_index;
}

}  // namespace depthbench
