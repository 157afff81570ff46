#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "depthbench/image_metrics.h"
#include "depthbench/pointcloud_metrics.h"
#include "depthbench/types.h"

namespace depthbench {

enum class DepthTransform { kRaw, kLog, kInverse };

DepthTransform ParseDepthTransform(const std::string& text);
std::string ToString(DepthTransform transform);

inline constexpr double kDefaultEdgeTruncation = 10.0;  // pixels

struct BoundaryConfig {
  DepthTransform transform = DepthTransform::kLog;
  double sigma = 1.0;
  /// Hysteresis thresholds as fractions of the maximum gradient magnitude.
  double low_ratio = 0.1;
  double high_ratio = 0.2;
  /// Depth assigned to sky pixels before filtering (sky is "far").
  double sky_depth = 100.0;

  void Validate() const;
};

struct EdgeMap {
  Mask edges;
  DepthTransform transform = DepthTransform::kLog;
  double sigma = 1.0;

  int width() const { return edges.width(); }
  int height() const { return edges.height(); }
};

/// Canny on an already smoothed single-channel image: Sobel gradients with
/// replicate borders, 4-direction non-maximum suppression and 8-connected
/// hysteresis with thresholds relative to the maximum magnitude.
Mask Canny(const Grid<double>& image, double low_ratio, double high_ratio);

/// Depth boundaries of `depth`. Invalid sky pixels are filled with
/// `sky_depth`, other invalid pixels with their nearest valid depth; the
/// transformed map is smoothed and passed to Canny. Edges on invalid pixels are
/// dropped, and every 8-connected edge component with a pixel 8-adjacent to an
/// invalid non-sky pixel is removed. `sky` may be null (no sky).
EdgeMap ExtractDepthBoundaries(const DepthMap& depth, const Mask* sky,
                               const BoundaryConfig& config = {});

/// Exact squared Euclidean distance (pixels^2) to the nearest set pixel;
/// -1 everywhere when no pixel is set.
Grid<std::int64_t> SquaredDistanceTransform(const Mask& edges);

/// Euclidean distance to the nearest edge pixel, clamped at `truncation`.
Grid<double> TruncatedEdt(const Mask& edges, double truncation = kDefaultEdgeTruncation);

struct EdgeMetrics {
  double accuracy = 0.0;      // pixels
  double completeness = 0.0;  // pixels
};

/// Accuracy: mean over predicted edge pixels of the truncated distance to the
/// ground-truth edges. Completeness: mean over ground-truth edge pixels of the
/// truncated distance to the predicted edges. An empty pixel set scores the
/// truncation value.
EdgeMetrics EdgeAccuracyCompleteness(const Mask& pred_edges, const Mask& gt_edges,
                                     double truncation = kDefaultEdgeTruncation);

struct BoundaryMetrics {
  ImageMetrics image;
  std::optional<PointcloudMetrics> pointcloud;
};

/// Image (and optionally pointcloud) metrics restricted to `mask` intersected
/// with the ground-truth edges. Both clouds are restricted to those pixels.
BoundaryMetrics BoundaryMaskedMetrics(const DepthMap& pred, const DepthMap& gt,
                                      const Mask& mask, const Mask& gt_edges,
                                      const Intrinsics* K,
                                      double point_threshold = kDefaultPointThreshold);

/// 8-bit binary PGM (P5): 0 background, 255 edge.
void WriteEdgePgm(const Mask& edges, const std::filesystem::path& path);
Mask ReadEdgePgm(const std::filesystem::path& path);

}  // namespace depthbench
