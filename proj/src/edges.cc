#include "depthbench/edges.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <vector>

#include "depthbench/filters.h"
#include "depthbench/geometry.h"

namespace depthbench {

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

// Gradient magnitudes are quantized to this many steps of the image maximum
// before suppression and hysteresis, so ulp-level noise cannot flip a tie.
constexpr double kMagnitudeSteps = 1e9;

constexpr std::array<std::array<int, 2>, 8> kNeighbours8 = {
    {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

double TransformDepth(double d, DepthTransform transform) {
  switch (transform) {
    case DepthTransform::kRaw:
      return d;
    case DepthTransform::kLog:
      return std::log(d);
    case DepthTransform::kInverse:
      return 1.0 / d;
  }
  return d;
}

// Fills invalid pixels: sky gets `sky_depth`, the rest takes the value of the
// nearest (8-connected BFS) valid or sky pixel.
Grid<double> FillInvalid(const DepthMap& depth, const Mask* sky, double sky_depth) {
  const int w = depth.width();
  const int h = depth.height();
  Grid<double> filled(w, h, 0.0);
  Mask known(w, h, 0);
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (depth.valid(x, y)) {
        filled(x, y) = depth.depth(x, y);
      } else if (sky && (*sky)(x, y)) {
        filled(x, y) = sky_depth;
      } else {
        continue;
      }
      known(x, y) = 1;
      queue.emplace_back(x, y);
    }
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& [dx, dy] : kNeighbours8) {
      const int nx = x + dx;
      const int ny = y + dy;
      if (!known.Contains(nx, ny) || known(nx, ny)) continue;
      known(nx, ny) = 1;
      filled(nx, ny) = filled(x, y);
      queue.emplace_back(nx, ny);
    }
  }
  return filled;
}

// Exact 1D squared distance transform of `f` (kUnreached = no site) using the
// lower envelope of parabolas.
void DistanceTransform1D(std::span<const std::int64_t> f, std::span<std::int64_t> out) {
  const int n = static_cast<int>(f.size());
  std::vector<int> sites(n);
  std::vector<double> bounds(n + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kUnreached) continue;
    if (k < 0) {
      k = 0;
      sites[0] = q;
      bounds[0] = -std::numeric_limits<double>::infinity();
      bounds[1] = std::numeric_limits<double>::infinity();
      continue;
    }
    double s;
    while (true) {
      const int p = sites[k];
      s = static_cast<double>((f[q] + std::int64_t{q} * q) - (f[p] + std::int64_t{p} * p)) /
          (2.0 * (q - p));
      if (s > bounds[k]) break;
      --k;
    }
    ++k;
    sites[k] = q;
    bounds[k] = s;
    bounds[k + 1] = std::numeric_limits<double>::infinity();
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), kUnreached);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (bounds[j + 1] < q) ++j;
    const std::int64_t d = q - sites[j];
    out[q] = d * d + f[sites[j]];
  }
}

}  // namespace

DepthTransform ParseDepthTransform(const std::string& text) {
  if (text == "raw") return DepthTransform::kRaw;
  if (text == "log") return DepthTransform::kLog;
  if (text == "inverse") return DepthTransform::kInverse;
  throw Error("unknown depth transform '" + text + "'");
}

std::string ToString(DepthTransform transform) {
  switch (transform) {
    case DepthTransform::kRaw:
      return "raw";
    case DepthTransform::kLog:
      return "log";
    case DepthTransform::kInverse:
      return "inverse";
  }
  return "raw";
}

void BoundaryConfig::Validate() const {
  Check(sigma >= 0.0, "boundary sigma must be non-negative");
  Check(low_ratio > 0.0 && low_ratio <= high_ratio && high_ratio <= 1.0,
        "hysteresis ratios must satisfy 0 < low <= high <= 1");
  Check(sky_depth > 0.0, "sky depth must be positive");
}

Mask Canny(const Grid<double>& image, double low_ratio, double high_ratio) {
  const int w = image.width();
  const int h = image.height();
  auto at = [&](int x, int y) {
    return image(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };

  Grid<double> gx(w, h);
  Grid<double> gy(w, h);
  Grid<double> magnitude(w, h);
  double max_magnitude = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      gx(x, y) = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)) -
                 (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
      gy(x, y) = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)) -
                 (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
      magnitude(x, y) = std::hypot(gx(x, y), gy(x, y));
      max_magnitude = std::max(max_magnitude, magnitude(x, y));
    }
  }
  Mask edges(w, h, 0);
  if (max_magnitude == 0.0) return edges;

  Grid<std::int64_t> q(w, h);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = std::llround(magnitude[i] / max_magnitude * kMagnitudeSteps);
  }
  auto q_at = [&](int x, int y) -> std::int64_t {
    return q.Contains(x, y) ? q(x, y) : 0;
  };

  // Non-maximum suppression along the quantized gradient direction. The
  // asymmetric comparison keeps exactly one pixel of a tied pair.
  Grid<std::int64_t> thin(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int64_t m = q(x, y);
      if (m == 0) continue;
      double angle = std::atan2(gy(x, y), gx(x, y)) * 180.0 / M_PI;
      if (angle < 0.0) angle += 180.0;
      int dx;
      int dy;
      if (angle < 22.5 || angle >= 157.5) {
        dx = 1, dy = 0;
      } else if (angle < 67.5) {
        dx = 1, dy = 1;
      } else if (angle < 112.5) {
        dx = 0, dy = 1;
      } else {
        dx = -1, dy = 1;
      }
      if (m > q_at(x - dx, y - dy) && m >= q_at(x + dx, y + dy)) thin(x, y) = m;
    }
  }

  const auto high = static_cast<std::int64_t>(std::llround(high_ratio * kMagnitudeSteps));
  const auto low = static_cast<std::int64_t>(std::llround(low_ratio * kMagnitudeSteps));
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (thin(x, y) >= high) {
        edges(x, y) = 1;
        queue.emplace_back(x, y);
      }
    }
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& [dx, dy] : kNeighbours8) {
      const int nx = x + dx;
      const int ny = y + dy;
      if (!edges.Contains(nx, ny) || edges(nx, ny)) continue;
      if (thin(nx, ny) >= low && thin(nx, ny) > 0) {
        edges(nx, ny) = 1;
        queue.emplace_back(nx, ny);
      }
    }
  }
  return edges;
}

EdgeMap ExtractDepthBoundaries(const DepthMap& depth, const Mask* sky,
                               const BoundaryConfig& config) {
  config.Validate();
  depth.Validate();
  if (sky) Check(sky->SameShape(depth.depth), "sky mask shape mismatch");
  Check(CountTrue(depth.valid) > 0, "depth map has no valid pixels");

  const int w = depth.width();
  const int h = depth.height();
  Grid<double> transformed = FillInvalid(depth, sky, config.sky_depth);
  for (double& v : transformed.values()) v = TransformDepth(v, config.transform);
  Mask edges = Canny(GaussianBlur(transformed, config.sigma), config.low_ratio,
                     config.high_ratio);

  auto invalid_non_sky = [&](int x, int y) {
    return !depth.valid(x, y) && !(sky && (*sky)(x, y));
  };
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!depth.valid[i]) edges[i] = 0;
  }

  // Remove 8-connected components touching invalid non-sky pixels.
  Mask visited(w, h, 0);
  std::vector<std::pair<int, int>> component;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!edges(x, y) || visited(x, y)) continue;
      component.clear();
      component.emplace_back(x, y);
      visited(x, y) = 1;
      bool touches_invalid = false;
      for (std::size_t head = 0; head < component.size(); ++head) {
        const auto [cx, cy] = component[head];
        for (const auto& [dx, dy] : kNeighbours8) {
          const int nx = cx + dx;
          const int ny = cy + dy;
          if (!edges.Contains(nx, ny)) continue;
          if (invalid_non_sky(nx, ny)) touches_invalid = true;
          if (edges(nx, ny) && !visited(nx, ny)) {
            visited(nx, ny) = 1;
            component.emplace_back(nx, ny);
          }
        }
      }
      if (touches_invalid) {
        for (const auto& [cx, cy] : component) edges(cx, cy) = 0;
      }
    }
  }
  return EdgeMap{std::move(edges), config.transform, config.sigma};
}

Grid<std::int64_t> SquaredDistanceTransform(const Mask& edges) {
  const int w = edges.width();
  const int h = edges.height();
  Grid<std::int64_t> columns(w, h, kUnreached);

  // Columns: distance to the nearest edge in the same column.
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (edges(x, y)) last = y;
      if (last >= 0) columns(x, y) = std::int64_t{y - last} * (y - last);
    }
    last = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (edges(x, y)) last = y;
      if (last >= 0) {
        columns(x, y) = std::min(columns(x, y), std::int64_t{last - y} * (last - y));
      }
    }
  }

  Grid<std::int64_t> out(w, h, -1);
  std::vector<std::int64_t> row_in(w);
  std::vector<std::int64_t> row_out(w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) row_in[x] = columns(x, y);
    DistanceTransform1D(row_in, row_out);
    for (int x = 0; x < w; ++x) {
      out(x, y) = row_out[x] == kUnreached ? -1 : row_out[x];
    }
  }
  return out;
}

Grid<double> TruncatedEdt(const Mask& edges, double truncation) {
  Check(truncation > 0.0, "EDT truncation must be positive");
  const Grid<std::int64_t> squared = SquaredDistanceTransform(edges);
  Grid<double> out(edges.width(), edges.height(), truncation);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (squared[i] < 0) continue;
    out[i] = std::min(std::sqrt(static_cast<double>(squared[i])), truncation);
  }
  return out;
}

namespace {

double MeanOver(const Grid<double>& distances, const Mask& pixels, double truncation) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (!pixels[i]) continue;
    sum += distances[i];
    ++count;
  }
  return count == 0 ? truncation : sum / static_cast<double>(count);
}

}  // namespace

EdgeMetrics EdgeAccuracyCompleteness(const Mask& pred_edges, const Mask& gt_edges,
                                     double truncation) {
  Check(pred_edges.SameShape(gt_edges), "edge maps differ in shape");
  EdgeMetrics m;
  m.accuracy = MeanOver(TruncatedEdt(gt_edges, truncation), pred_edges, truncation);
  m.completeness = MeanOver(TruncatedEdt(pred_edges, truncation), gt_edges, truncation);
  return m;
}

BoundaryMetrics BoundaryMaskedMetrics(const DepthMap& pred, const DepthMap& gt,
                                      const Mask& mask, const Mask& gt_edges,
                                      const Intrinsics* K, double point_threshold) {
  Check(mask.SameShape(gt_edges), "boundary mask shape mismatch");
  const Mask boundary = mask & gt_edges;
  Check(CountTrue(boundary) > 0,
        "evaluation mask does not intersect the ground-truth edges");

  BoundaryMetrics out;
  out.image = ComputeImageMetrics(pred, gt, boundary);
  if (K) {
    out.pointcloud = ComputePointcloudMetrics(Backproject(pred, *K, &boundary),
                                              Backproject(gt, *K, &boundary),
                                              point_threshold);
  }
  return out;
}

void WriteEdgePgm(const Mask& edges, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  Check(static_cast<bool>(out), "cannot write " + path.string());
  out << "P5\n" << edges.width() << ' ' << edges.height() << "\n255\n";
  for (std::uint8_t v : edges.values()) out.put(static_cast<char>(v ? 255 : 0));
  Check(static_cast<bool>(out), "failed writing " + path.string());
}

Mask ReadEdgePgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Check(static_cast<bool>(in), "cannot read " + path.string());
  auto token = [&]() {
    std::string t;
    while (in >> std::ws && in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
    }
    in >> t;
    return t;
  };
  Check(token() == "P5", path.string() + " is not a binary PGM");
  int w = 0;
  int h = 0;
  int maxval = 0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    throw Error("malformed PGM header in " + path.string());
  }
  Check(w > 0 && h > 0 && maxval == 255, "unsupported PGM in " + path.string());
  in.get();  // single whitespace after the header

  Mask edges(w, h);
  std::vector<char> bytes(edges.size());
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  Check(in.gcount() == static_cast<std::streamsize>(bytes.size()),
        "truncated PGM payload in " + path.string());
  for (std::size_t i = 0; i < bytes.size(); ++i) edges[i] = bytes[i] != 0 ? 1 : 0;
  return edges;
}

}  // namespace depthbench
