#include "depthbench/regularizers.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace depthbench {

namespace {

// Forward difference of the given order along x (dx=1) or y (dy=1).
double Difference(const Grid<double>& g, int x, int y, int order, int dx, int dy) {
  if (order == 1) return g(x + dx, y + dy) - g(x, y);
  return g(x + 2 * dx, y + 2 * dy) - 2.0 * g(x + dx, y + dy) + g(x, y);
}

double DirectionalTerm(const Grid<double>& disp, const std::vector<Grid<double>>& image,
                       int order, bool edge_aware, int dx, int dy) {
  const int w_end = disp.width() - order * dx;
  const int h_end = disp.height() - order * dy;
  double sum = 0.0;
  for (int y = 0; y < h_end; ++y) {
    for (int x = 0; x < w_end; ++x) {
      double term = std::abs(Difference(disp, x, y, order, dx, dy));
      if (edge_aware) {
        double grad = 0.0;
        for (const Grid<double>& channel : image) {
          grad += std::abs(Difference(channel, x, y, order, dx, dy));
        }
        term *= std::exp(-grad / static_cast<double>(image.size()));
      }
      sum += term;
    }
  }
  return sum / (static_cast<double>(w_end) * h_end);
}

}  // namespace

void SmoothnessConfig::Validate() const {
  Check(order == 1 || order == 2, "smoothness order must be 1 or 2");
  Check(gaussian_sigma >= 0.0, "Gaussian sigma must be non-negative");
  Check(weight >= 0.0, "smoothness weight must be non-negative");
}

double SmoothnessLoss(const DisparityMap& disparity, const Image& image,
                      const SmoothnessConfig& config) {
  config.Validate();
  const int w = disparity.width();
  const int h = disparity.height();
  Check(w > config.order && h > config.order,
        "disparity too small for the requested gradient order");

  double mean = 0.0;
  for (double v : disparity.values.values()) mean += v;
  mean /= static_cast<double>(disparity.values.size());
  Check(mean > 0.0, "disparity mean must be positive for normalization");

  Grid<double> norm = disparity.values;
  for (double& v : norm.values()) v /= mean;
  norm = GaussianBlur(norm, config.gaussian_sigma);

  std::vector<Grid<double>> channels;
  if (config.edge_aware) {
    Check(image.width() == w && image.height() == h,
          "image shape must match the disparity");
    for (int c = 0; c < image.channels(); ++c) {
      channels.push_back(GaussianBlur(image.Channel(c), config.gaussian_sigma));
    }
  }

  const double x_term =
      DirectionalTerm(norm, channels, config.order, config.edge_aware, 1, 0);
  const double y_term =
      DirectionalTerm(norm, channels, config.order, config.edge_aware, 0, 1);
  return config.weight * 0.5 * (x_term + y_term);
}

double OcclusionLoss(const DisparityMap& disparity, OcclusionVariant variant) {
  Check(!disparity.values.empty(), "empty disparity map");
  double sum = 0.0;
  for (double v : disparity.values.values()) {
    sum += variant == OcclusionVariant::kBackground ? v : 1.0 - v;
  }
  return sum / static_cast<double>(disparity.values.size());
}

double ExplainabilityRegularization(const PredictiveMask& mask) {
  Check(mask.kind == PredictiveMask::Kind::kExplainability,
        "explainability regularization requires an explainability mask");
  Check(!mask.values.empty(), "empty mask");
  double sum = 0.0;
  for (double m : mask.values.values()) {
    Check(m >= 0.0 && m <= 1.0, "explainability mask values must be in [0, 1]");
    sum -= std::log(std::max(m, kExplainabilityFloor));
  }
  return sum / static_cast<double>(mask.values.size());
}

}  // namespace depthbench
