#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace depthbench {

/// Raised for every contract violation detected by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void Check(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

/// Row-major 2D grid. (x, y) indexes (column, row).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    Check(width >= 0 && height >= 0, "grid dimensions must be non-negative");
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) { return data_[Index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[Index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool Contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  template <typename U>
  bool SameShape(const Grid<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Boolean grid; nonzero is true.
using Mask = Grid<std::uint8_t>;

std::size_t CountTrue(const Mask& mask);
Mask operator&(const Mask& a, const Mask& b);

/// Multi-channel image with interleaved channels. Photometric values are
/// expected in [0, 1]; feature maps may hold arbitrary values.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);
  static Image FromGrid(const Grid<double>& grid);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  double& at(int x, int y, int c) { return data_[Index(x, y, c)]; }
  double at(int x, int y, int c) const { return data_[Index(x, y, c)]; }

  Grid<double> Channel(int c) const;
  void SetChannel(int c, const Grid<double>& grid);

  bool SameShape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t Index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Metric depth with a validity mask. Valid pixels hold finite, strictly
/// positive depth in meters.
struct DepthMap {
  Grid<double> depth;
  Mask valid;

  DepthMap() = default;
  DepthMap(int width, int height)
      : depth(width, height, 0.0), valid(width, height, 0) {}

  /// Marks every finite, strictly positive value as valid.
  static DepthMap FromValues(Grid<double> values);

  int width() const { return depth.width(); }
  int height() const { return depth.height(); }

  void Set(int x, int y, double meters) {
    depth(x, y) = meters;
    valid(x, y) = 1;
  }

  /// Throws unless every valid pixel carries finite positive depth.
  void Validate() const;
};

/// Sigmoid disparity in [0, 1].
struct DisparityMap {
  Grid<double> values;

  DisparityMap() = default;
  explicit DisparityMap(Grid<double> v) : values(std::move(v)) {}
  DisparityMap(int width, int height, double fill = 0.0)
      : values(width, height, fill) {}

  int width() const { return values.width(); }
  int height() const { return values.height(); }
};

/// Pinhole intrinsics in pixels. (cx, cy) follow the pixel-center convention
/// with the origin at the top-left pixel center.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  void Validate() const;
  bool Matches(int w, int h) const { return width == w && height == h; }
};

struct DepthRange {
  double min = 0.1;
  double max = 100.0;
};

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Points in the camera frame, meters.
using PointCloud = std::vector<Vec3>;

}  // namespace depthbench
