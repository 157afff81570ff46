#include "depthbench/regression.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace depthbench {

namespace {

std::vector<double> JointAbsErrors(const DepthMap& pred, const DepthMap& proxy) {
  Check(pred.depth.SameShape(proxy.depth), "prediction and proxy differ in shape");
  std::vector<double> errors;
  for (std::size_t i = 0; i < pred.depth.size(); ++i) {
    if (pred.valid[i] && proxy.valid[i]) {
      errors.push_back(std::abs(pred.depth[i] - proxy.depth[i]));
    }
  }
  Check(!errors.empty(), "no jointly valid pixels");
  return errors;
}

}  // namespace

BerhuResult BerhuLoss(const DepthMap& pred, const DepthMap& proxy,
                      std::optional<double> threshold) {
  const std::vector<double> errors = JointAbsErrors(pred, proxy);

  BerhuResult result;
  if (threshold) {
    Check(*threshold > 0.0, "berHu threshold must be positive");
    result.threshold = *threshold;
  } else {
    result.threshold = 0.2 * *std::max_element(errors.begin(), errors.end());
    if (result.threshold == 0.0) return result;
  }

  const double tau = result.threshold;
  double sum = 0.0;
  for (double e : errors) {
    sum += e <= tau ? e : (e * e + tau * tau) / (2.0 * tau);
  }
  result.loss = sum / static_cast<double>(errors.size());
  return result;
}

double LogL1Loss(const DepthMap& pred, const DepthMap& proxy) {
  const std::vector<double> errors = JointAbsErrors(pred, proxy);
  double sum = 0.0;
  for (double e : errors) sum += std::log1p(e);
  return sum / static_cast<double>(errors.size());
}

double VirtualStereoLoss(const DisparityMap& target, const DisparityMap& warped,
                         const Mask& warped_valid) {
  Check(target.values.SameShape(warped.values) &&
            warped_valid.SameShape(warped.values),
        "disparity shape mismatch");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < target.values.size(); ++i) {
    if (!warped_valid[i]) continue;
    sum += std::abs(target.values[i] - warped.values[i]);
    ++count;
  }
  Check(count > 0, "warped disparity has no valid pixels");
  return sum / static_cast<double>(count);
}

}  // namespace depthbench
