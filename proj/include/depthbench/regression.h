#pragma once

#include <optional>

#include "depthbench/types.h"

namespace depthbench {

struct BerhuResult {
  double loss = 0.0;
  /// Threshold used. Zero only in the degenerate all-zero-error case.
  double threshold = 0.0;
};

/// Reverse Huber loss averaged over jointly valid pixels:
///   |e|                      if |e| <= tau
///   (e^2 + tau^2) / (2 tau)  otherwise.
/// Without an explicit threshold, tau = 0.2 * max |e| over the pixels passed
/// in this call.
BerhuResult BerhuLoss(const DepthMap& pred, const DepthMap& proxy,
                      std::optional<double> threshold = std::nullopt);

/// Mean of log(1 + |pred - proxy|) over jointly valid pixels.
double LogL1Loss(const DepthMap& pred, const DepthMap& proxy);

/// Mean absolute disparity difference over pixels where the warped virtual
/// disparity is valid.
double VirtualStereoLoss(const DisparityMap& target, const DisparityMap& warped,
                         const Mask& warped_valid);

}  // namespace depthbench
