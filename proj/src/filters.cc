#include "depthbench/filters.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace depthbench {

Grid<double> GaussianBlur(const Grid<double>& grid, double sigma) {
  Check(sigma >= 0.0, "Gaussian sigma must be non-negative");
  if (sigma == 0.0 || grid.empty()) return grid;

  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += kernel[i + radius];
  }
  for (double& k : kernel) k /= total;

  const int w = grid.width();
  const int h = grid.height();
  Grid<double> horizontal(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        sum += kernel[i + radius] * grid(std::clamp(x + i, 0, w - 1), y);
      }
      horizontal(x, y) = sum;
    }
  }
  Grid<double> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        sum += kernel[i + radius] * horizontal(x, std::clamp(y + i, 0, h - 1));
      }
      out(x, y) = sum;
    }
  }
  return out;
}

}  // namespace depthbench
