#include "depthbench/panorama.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

namespace depthbench {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

int WrapColumn(long long c, int width) {
  const long long m = c % width;
  return static_cast<int>(m < 0 ? m + width : m);
}

void SampleWrapped(const Image& image, double col, double row, std::span<double> out) {
  const int w = image.width();
  const int h = image.height();
  const double r = std::clamp(row, 0.0, h - 1.0);
  const double c0f = std::floor(col);
  const double wx = col - c0f;
  const int x0 = WrapColumn(static_cast<long long>(c0f), w);
  const int x1 = WrapColumn(static_cast<long long>(c0f) + 1, w);
  const int y0 = static_cast<int>(std::floor(r));
  const int y1 = std::min(y0 + 1, h - 1);
  const double wy = r - y0;
  for (int c = 0; c < image.channels(); ++c) {
    const double top = (1.0 - wx) * image.at(x0, y0, c) + wx * image.at(x1, y0, c);
    const double bottom = (1.0 - wx) * image.at(x0, y1, c) + wx * image.at(x1, y1, c);
    out[c] = (1.0 - wy) * top + wy * bottom;
  }
}

}  // namespace

void Panorama::Validate() const {
  Check(image.width() > 0 && image.height() > 0, "empty panorama");
  Check(depth.width() == image.width() && depth.height() == image.height(),
        "panorama image and depth differ in size");
  Check(image.width() == 2 * image.height(),
        "equirectangular panorama must be twice as wide as it is high");
  depth.Validate();
}

Intrinsics PatchSpec::intrinsics() const {
  Intrinsics K{fx, fy, cx, cy, width, height};
  K.Validate();
  return K;
}

Vec2 DirectionToEquirect(const Vec3& direction, int pano_width, int pano_height) {
  Check(std::abs(direction.norm() - 1.0) <= 1e-9, "direction must be a unit vector");
  const double longitude = std::atan2(direction.x(), direction.z());
  const double latitude = std::asin(std::clamp(-direction.y(), -1.0, 1.0));
  return {pano_width / 2.0 + longitude / (2.0 * M_PI) * pano_width,
          pano_height / 2.0 - latitude / M_PI * pano_height};
}

Mat3 PatchRotation(double azimuth_deg, double elevation_deg) {
  const Mat3 yaw =
      Eigen::AngleAxisd(azimuth_deg * kDegToRad, Vec3::UnitY()).toRotationMatrix();
  // Looking up means turning the forward axis towards -y.
  const Mat3 pitch =
      Eigen::AngleAxisd(elevation_deg * kDegToRad, Vec3::UnitX()).toRotationMatrix();
  return yaw * pitch;
}

Patch SamplePatch(const Panorama& pano, const PatchSpec& spec) {
  pano.Validate();
  const Intrinsics K = spec.intrinsics();
  const Mat3 rotation = PatchRotation(spec.azimuth, spec.elevation);
  const int pw = pano.width();
  const int ph = pano.height();

  Patch patch{spec.azimuth, Image(spec.width, spec.height, pano.image.channels()),
              DepthMap(spec.width, spec.height)};
  std::vector<double> sample(pano.image.channels());
  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u) {
      const Vec3 ray((u - K.cx) / K.fx, (v - K.cy) / K.fy, 1.0);
      const double ray_norm = ray.norm();
      const Vec3 direction = rotation * (ray / ray_norm);
      const Vec2 coords = DirectionToEquirect(direction.normalized(), pw, ph);

      SampleWrapped(pano.image, coords.x(), coords.y(), sample);
      for (int c = 0; c < pano.image.channels(); ++c) patch.image.at(u, v, c) = sample[c];

      const int col = WrapColumn(std::llround(coords.x()), pw);
      const int row = std::clamp(static_cast<int>(std::llround(coords.y())), 0, ph - 1);
      if (!pano.depth.valid(col, row)) continue;
      const double range = pano.depth.depth(col, row);
      patch.depth.Set(u, v, spec.radial_depth ? range / ray_norm : range);
    }
  }
  return patch;
}

std::vector<Patch> GenerateScenePatches(const Panorama& pano, int step_deg,
                                        const PatchSpec& base) {
  Check(step_deg > 0 && 360 % step_deg == 0, "azimuth step must divide 360");
  std::vector<Patch> patches;
  for (int azimuth = 0; azimuth < 360; azimuth += step_deg) {
    PatchSpec spec = base;
    spec.azimuth = azimuth;
    spec.elevation = 0.0;
    patches.push_back(SamplePatch(pano, spec));
  }
  return patches;
}

}  // namespace depthbench
