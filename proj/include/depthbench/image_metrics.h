#pragma once

#include <string>

#include "depthbench/types.h"

namespace depthbench {

/// How a prediction is scaled onto the ground truth before evaluation.
struct AlignmentMode {
  enum class Kind { kMedian, kFixed, kNone };
  Kind kind = Kind::kMedian;
  double scale = 1.0;

  static AlignmentMode Median() { return {Kind::kMedian, 1.0}; }
  static AlignmentMode Fixed(double s);
  static AlignmentMode None() { return {Kind::kNone, 1.0}; }

  /// Parses "median", "none" or "fixed:<scale>".
  static AlignmentMode Parse(const std::string& text);
  std::string ToString() const;
};

struct AlignedPrediction {
  DepthMap depth;
  double scale = 1.0;
};

/// Median mode scales by median(gt) / median(pred) over jointly valid pixels,
/// further restricted to `mask` when given. The median of an even-sized set is
/// the mean of its two middle values.
AlignedPrediction AlignPrediction(const DepthMap& pred, const DepthMap& gt,
                                  const AlignmentMode& mode,
                                  const Mask* mask = nullptr);

/// gt valid and min <= gt <= max. Depends only on the ground truth.
Mask EvaluationMask(const DepthMap& gt, double min_depth, double max_depth);

struct ClampedPair {
  DepthMap pred;
  DepthMap gt;
  Mask mask;
};

/// Clamps valid prediction values into [min, max] and builds the evaluation
/// mask. Ground truth is filtered by the mask, never clamped.
ClampedPair ClampAndMask(const DepthMap& pred, const DepthMap& gt,
                         double min_depth, double max_depth);

struct ImageMetrics {
  double mae = 0.0;
  double rmse = 0.0;
  double inv_mae = 0.0;
  double inv_rmse = 0.0;
  double log_mae = 0.0;
  double log_rmse = 0.0;
  double log_si = 0.0;
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  /// Historical variant with |e|^2 / y instead of |e|^2 / y^2.
  double sq_rel_legacy = 0.0;
  /// Percent of pixels with max(pred/gt, gt/pred) < 1.25^k.
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
};

/// Every image metric over the pixels set in `mask`. Throws on an empty mask
/// or when the prediction is missing at an evaluated pixel.
ImageMetrics ComputeImageMetrics(const DepthMap& pred, const DepthMap& gt,
                                 const Mask& mask);

}  // namespace depthbench
