#pragma once

#include <vector>

#include "depthbench/types.h"

namespace depthbench {

/// Equirectangular image with aligned range (or z) depth. Column 0 sits at
/// longitude -pi, row 0 at the zenith; pixel i has its center at coordinate i.
struct Panorama {
  Image image;
  DepthMap depth;

  int width() const { return image.width(); }
  int height() const { return image.height(); }

  /// Throws unless image and depth agree in size and width = 2 * height.
  void Validate() const;
};

/// Virtual pinhole camera looking out of the panorama center.
struct PatchSpec {
  double azimuth = 0.0;    // degrees, positive turns towards +x (right)
  double elevation = 0.0;  // degrees, positive looks up
  int width = 1242;
  int height = 376;
  double fx = 721.5;
  double fy = 721.5;
  double cx = 620.5;
  double cy = 187.5;
  /// Panorama depth holds distance along the ray and is converted to z-depth.
  /// Disable when the source already stores planar depth.
  bool radial_depth = true;

  Intrinsics intrinsics() const;
};

/// Continuous panorama coordinates (column, row) of a unit direction in the
/// camera frame (x right, y down, z forward). Longitude atan2(x, z) maps to
/// column W/2 + lon / (2 pi) * W and latitude asin(-y) to row H/2 - lat / pi * H.
/// At the poles the column is atan2(0, 0) = W/2.
Vec2 DirectionToEquirect(const Vec3& direction, int pano_width, int pano_height);

/// Camera-to-panorama rotation for the given azimuth and elevation.
Mat3 PatchRotation(double azimuth_deg, double elevation_deg);

struct Patch {
  double azimuth = 0.0;
  Image image;
  DepthMap depth;
};

/// Renders one perspective patch. The image is sampled bilinearly (columns
/// wrap around, rows clamp); depth uses nearest-neighbour lookup and inherits
/// the panorama's validity.
Patch SamplePatch(const Panorama& pano, const PatchSpec& spec);

/// One patch every `step_deg` degrees of azimuth, starting at 0. Throws
/// unless `step_deg` divides 360.
std::vector<Patch> GenerateScenePatches(const Panorama& pano, int step_deg,
                                        const PatchSpec& base = {});

}  // namespace depthbench
