#pragma once

#include "depthbench/filters.h"
#include "depthbench/photometric.h"
#include "depthbench/types.h"

namespace depthbench {

struct SmoothnessConfig {
  int order = 1;
  bool edge_aware = true;
  /// Gaussian pre-smoothing of disparity and image; 0 disables it.
  double gaussian_sigma = 0.0;
  /// Multiplies the returned value.
  double weight = 1.0;

  void Validate() const;
};

/// Smoothness of the mean-normalized disparity. Forward differences of the
/// configured order are taken in x and y (the trailing row/column is dropped),
/// optionally damped by exp(-|image gradient|) averaged over channels, and the
/// x and y means are averaged. `image` is only read when edge_aware is set.
double SmoothnessLoss(const DisparityMap& disparity, const Image& image,
                      const SmoothnessConfig& config = {});

enum class OcclusionVariant { kBackground, kForeground };

/// Background: mean disparity. Foreground: mean of (1 - disparity).
double OcclusionLoss(const DisparityMap& disparity, OcclusionVariant variant);

inline constexpr double kExplainabilityFloor = 1e-7;

/// Binary cross-entropy against an all-ones target: mean of -log(M), with M
/// floored at kExplainabilityFloor.
double ExplainabilityRegularization(const PredictiveMask& mask);

}  // namespace depthbench
