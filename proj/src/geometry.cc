#include "depthbench/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace depthbench {

namespace {

constexpr double kDisparityTolerance = 1e-6;

Mat3 Skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),  //
      v.z(), 0.0, -v.x(),   //
      -v.y(), v.x(), 0.0;
  return m;
}

}  // namespace

bool RigidTransform::IsProper(double tolerance) const {
  const Mat3 gram = rotation.transpose() * rotation;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > tolerance) return false;
  return std::abs(rotation.determinant() - 1.0) <= tolerance;
}

DepthMap DisparityToDepth(const DisparityMap& disparity,
                          const DepthRange& range) {
  Check(range.min > 0.0 && range.min < range.max, "invalid depth range");
  const double shift = 1.0 / range.max;
  const double scale = 1.0 / range.min - 1.0 / range.max;

  DepthMap out(disparity.width(), disparity.height());
  for (std::size_t i = 0; i < disparity.values.size(); ++i) {
    double s = disparity.values[i];
    Check(std::isfinite(s) && s >= -kDisparityTolerance &&
              s <= 1.0 + kDisparityTolerance,
          "disparity outside [0, 1]");
    s = std::clamp(s, 0.0, 1.0);
    // Endpoints are returned exactly; the affine form rounds at s = 1.
    double d;
    if (s == 0.0) {
      d = range.max;
    } else if (s == 1.0) {
      d = range.min;
    } else {
      d = std::clamp(1.0 / (scale * s + shift), range.min, range.max);
    }
    out.depth[i] = d;
    out.valid[i] = 1;
  }
  return out;
}

RigidTransform AxisAngleToTransform(const Vec3& rotation_vector,
                                    const Vec3& translation) {
  const double theta_sq = rotation_vector.squaredNorm();
  const double theta = std::sqrt(theta_sq);

  // R = I + A [r]x + B [r]x^2, A = sin(t)/t, B = (1 - cos(t))/t^2.
  double a;
  double b;
  if (theta < 1e-4) {
    a = 1.0 - theta_sq / 6.0 + theta_sq * theta_sq / 120.0;
    b = 0.5 - theta_sq / 24.0 + theta_sq * theta_sq / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta_sq;
  }
  const Mat3 k = Skew(rotation_vector);

  RigidTransform T;
  T.rotation = Mat3::Identity() + a * k + b * k * k;
  T.translation = translation;
  return T;
}

Vec3 BackprojectPixel(const Vec2& pixel, double depth, const Intrinsics& K) {
  return {depth * (pixel.x() - K.cx) / K.fx, depth * (pixel.y() - K.cy) / K.fy,
          depth};
}

Vec2 ProjectPoint(const Vec3& point, const Intrinsics& K) {
  return {K.fx * point.x() / point.z() + K.cx,
          K.fy * point.y() / point.z() + K.cy};
}

PointCloud Backproject(const DepthMap& depth, const Intrinsics& K,
                       const Mask* mask) {
  Check(K.Matches(depth.width(), depth.height()),
        "intrinsics do not match depth dimensions");
  if (mask) Check(mask->SameShape(depth.depth), "mask shape mismatch");

  PointCloud cloud;
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      if (!depth.valid(x, y)) continue;
      if (mask && !(*mask)(x, y)) continue;
      cloud.push_back(BackprojectPixel(Vec2(x, y), depth.depth(x, y), K));
    }
  }
  return cloud;
}

Reprojection Reproject(const Vec2& pixel, double depth, const Intrinsics& K,
                       const RigidTransform& T) {
  Check(depth > 0.0, "reprojection requires positive depth");
  const Vec3 point = T.Apply(BackprojectPixel(pixel, depth, K));

  Reprojection out;
  out.depth = point.z();
  out.in_front = point.z() > kBehindCameraEpsilon;
  if (out.in_front) {
    out.pixel = ProjectPoint(point, K);
  } else {
    out.pixel = Vec2::Constant(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

namespace {

struct BilinearWeights {
  int x0, y0, x1, y1;
  double wx, wy;
};

std::optional<BilinearWeights> Weights(int width, int height, double u,
                                       double v) {
  if (!std::isfinite(u) || !std::isfinite(v)) return std::nullopt;
  if (u < 0.0 || v < 0.0 || u > width - 1 || v > height - 1) {
    return std::nullopt;
  }
  BilinearWeights w;
  w.x0 = static_cast<int>(std::floor(u));
  w.y0 = static_cast<int>(std::floor(v));
  w.x1 = std::min(w.x0 + 1, width - 1);
  w.y1 = std::min(w.y0 + 1, height - 1);
  w.wx = u - w.x0;
  w.wy = v - w.y0;
  return w;
}

}  // namespace

std::optional<double> BilinearSample(const Grid<double>& grid, double u,
                                     double v) {
  const auto w = Weights(grid.width(), grid.height(), u, v);
  if (!w) return std::nullopt;
  const double top = (1.0 - w->wx) * grid(w->x0, w->y0) + w->wx * grid(w->x1, w->y0);
  const double bottom =
      (1.0 - w->wx) * grid(w->x0, w->y1) + w->wx * grid(w->x1, w->y1);
  return (1.0 - w->wy) * top + w->wy * bottom;
}

bool BilinearSample(const Image& image, double u, double v,
                    std::span<double> out) {
  Check(static_cast<int>(out.size()) == image.channels(),
        "output span must hold one value per channel");
  const auto w = Weights(image.width(), image.height(), u, v);
  if (!w) return false;
  for (int c = 0; c < image.channels(); ++c) {
    const double top =
        (1.0 - w->wx) * image.at(w->x0, w->y0, c) + w->wx * image.at(w->x1, w->y0, c);
    const double bottom =
        (1.0 - w->wx) * image.at(w->x0, w->y1, c) + w->wx * image.at(w->x1, w->y1, c);
    out[c] = (1.0 - w->wy) * top + w->wy * bottom;
  }
  return true;
}

WarpField WarpField::Identity(int width, int height) {
  WarpField warp{Grid<double>(width, height), Grid<double>(width, height),
                 Mask(width, height, 1)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      warp.u(x, y) = x;
      warp.v(x, y) = y;
    }
  }
  return warp;
}

WarpField ComputeWarp(const DepthMap& target_depth, const Intrinsics& K,
                      const RigidTransform& T) {
  Check(K.Matches(target_depth.width(), target_depth.height()),
        "intrinsics do not match depth dimensions");
  const int w = target_depth.width();
  const int h = target_depth.height();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  WarpField warp{Grid<double>(w, h, nan), Grid<double>(w, h, nan), Mask(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!target_depth.valid(x, y)) continue;
      const Reprojection r = Reproject(Vec2(x, y), target_depth.depth(x, y), K, T);
      if (!r.in_front) continue;
      warp.u(x, y) = r.pixel.x();
      warp.v(x, y) = r.pixel.y();
      warp.valid(x, y) = 1;
    }
  }
  return warp;
}

WarpedImage Warp(const Image& source, const WarpField& warp) {
  const int w = warp.width();
  const int h = warp.height();
  WarpedImage out{Image(w, h, source.channels()), Mask(w, h)};
  std::vector<double> sample(source.channels());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!warp.valid(x, y)) continue;
      if (!BilinearSample(source, warp.u(x, y), warp.v(x, y), sample)) continue;
      for (int c = 0; c < source.channels(); ++c) out.image.at(x, y, c) = sample[c];
      out.valid(x, y) = 1;
    }
  }
  return out;
}

WarpedImage SynthesizeView(const DepthMap& target_depth, const Image& support,
                           const Intrinsics& K, const RigidTransform& T) {
  Check(support.width() == target_depth.width() &&
            support.height() == target_depth.height(),
        "support image must match target depth dimensions");
  return Warp(support, ComputeWarp(target_depth, K, T));
}

}  // namespace depthbench
