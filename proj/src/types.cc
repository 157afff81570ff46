#include "depthbench/types.h"

#include <algorithm>
#include <cmath>

namespace depthbench {

std::size_t CountTrue(const Mask& mask) {
  return static_cast<std::size_t>(std::count_if(
      mask.values().begin(), mask.values().end(),
      [](std::uint8_t v) { return v != 0; }));
}

Mask operator&(const Mask& a, const Mask& b) {
  Check(a.SameShape(b), "mask shape mismatch");
  Mask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = (a[i] && b[i]) ? 1 : 0;
  }
  return out;
}

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  Check(width >= 0 && height >= 0 && channels >= 1,
        "invalid image dimensions");
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image Image::FromGrid(const Grid<double>& grid) {
  Image image(grid.width(), grid.height(), 1);
  std::copy(grid.values().begin(), grid.values().end(), image.data_.begin());
  return image;
}

Grid<double> Image::Channel(int c) const {
  Check(c >= 0 && c < channels_, "channel out of range");
  Grid<double> out(width_, height_);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) out(x, y) = at(x, y, c);
  }
  return out;
}

void Image::SetChannel(int c, const Grid<double>& grid) {
  Check(c >= 0 && c < channels_, "channel out of range");
  Check(grid.width() == width_ && grid.height() == height_,
        "channel shape mismatch");
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) at(x, y, c) = grid(x, y);
  }
}

DepthMap DepthMap::FromValues(Grid<double> values) {
  DepthMap out;
  out.valid = Mask(values.width(), values.height());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i];
    out.valid[i] = (std::isfinite(d) && d > 0.0) ? 1 : 0;
  }
  out.depth = std::move(values);
  return out;
}

void DepthMap::Validate() const {
  Check(depth.SameShape(valid), "depth/validity shape mismatch");
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (valid[i]) {
      Check(std::isfinite(depth[i]) && depth[i] > 0.0,
            "valid depth pixels must be finite and positive");
    }
  }
}

void Intrinsics::Validate() const {
  Check(fx > 0.0 && fy > 0.0, "focal lengths must be positive");
  Check(width > 0 && height > 0, "image size must be positive");
  Check(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height,
        "principal point must lie inside the image");
}

}  // namespace depthbench
