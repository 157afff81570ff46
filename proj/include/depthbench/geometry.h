#pragma once

#include <optional>

#include "depthbench/types.h"

namespace depthbench {

/// Camera motion from the target frame to a support frame.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform Identity() { return {}; }

  Vec3 Apply(const Vec3& point) const { return rotation * point + translation; }

  /// True when R^T R = I and det(R) = +1 within `tolerance`.
  bool IsProper(double tolerance = 1e-9) const;
};

/// Depth = 1 / (a * disparity + b) with b = 1/max and a = 1/min - 1/max, so
/// disparity 0 maps to range.max and disparity 1 to range.min.
DepthMap DisparityToDepth(const DisparityMap& disparity,
                          const DepthRange& range = {});

/// Rodrigues formula. The vector norm is the angle in radians.
RigidTransform AxisAngleToTransform(const Vec3& rotation_vector,
                                    const Vec3& translation);

Vec3 BackprojectPixel(const Vec2& pixel, double depth, const Intrinsics& K);
Vec2 ProjectPoint(const Vec3& point, const Intrinsics& K);

/// One point per valid pixel, in row-major pixel order. When `mask` is given,
/// only pixels that are also set in it are emitted.
PointCloud Backproject(const DepthMap& depth, const Intrinsics& K,
                       const Mask* mask = nullptr);

struct Reprojection {
  Vec2 pixel;
  double depth = 0.0;
  bool in_front = false;
};

inline constexpr double kBehindCameraEpsilon = 1e-6;

/// K * T * (depth * K^-1 * pixel). Points with transformed z below
/// kBehindCameraEpsilon are flagged as behind the camera.
Reprojection Reproject(const Vec2& pixel, double depth, const Intrinsics& K,
                       const RigidTransform& T);

/// Bilinear interpolation at a continuous coordinate. Returns nullopt when the
/// coordinate falls outside [0, W-1] x [0, H-1] or is non-finite.
std::optional<double> BilinearSample(const Grid<double>& grid, double u,
                                     double v);
bool BilinearSample(const Image& image, double u, double v,
                    std::span<double> out);

/// Per-pixel sampling coordinates into a support frame.
struct WarpField {
  Grid<double> u;
  Grid<double> v;
  Mask valid;

  int width() const { return u.width(); }
  int height() const { return u.height(); }

  static WarpField Identity(int width, int height);
};

struct WarpedImage {
  Image image;
  Mask valid;
};

/// Correspondences for every target pixel. A pixel is valid when the target
/// depth is valid and the reprojected point lies in front of the camera.
/// Bounds are checked at sampling time.
WarpField ComputeWarp(const DepthMap& target_depth, const Intrinsics& K,
                      const RigidTransform& T);

/// Samples `source` at the warp coordinates; out-of-bounds samples are masked
/// invalid, never clamped.
WarpedImage Warp(const Image& source, const WarpField& warp);

/// ComputeWarp followed by Warp.
WarpedImage SynthesizeView(const DepthMap& target_depth, const Image& support,
                           const Intrinsics& K, const RigidTransform& T);

}  // namespace depthbench
