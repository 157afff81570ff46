#pragma once

#include <functional>
#include <span>
#include <vector>

#include "depthbench/geometry.h"
#include "depthbench/types.h"

namespace depthbench {

/// Per-pixel non-negative loss with validity.
struct LossMap {
  Grid<double> values;
  Mask valid;

  LossMap() = default;
  LossMap(int width, int height)
      : values(width, height, 0.0), valid(width, height, 1) {}

  int width() const { return values.width(); }
  int height() const { return values.height(); }

  /// Mean over valid pixels (also set in `keep`, when given). Throws if no
  /// pixel contributes.
  double Mean(const Mask* keep = nullptr) const;
};

struct PhotometricConfig {
  double ssim_weight = 0.85;
  int ssim_window = 3;
  double ssim_c1 = 0.01 * 0.01;
  double ssim_c2 = 0.03 * 0.03;

  void Validate() const;
};

/// Local-window SSIM per pixel and channel. Window statistics are box means
/// with replicate padding, so the output has full resolution.
Image Ssim(const Image& a, const Image& b, const PhotometricConfig& config = {});

/// alpha * (1 - SSIM) / 2 + (1 - alpha) * |a - b|, averaged over channels.
/// Validity is taken from `synth_valid` when given, otherwise all pixels.
LossMap PhotometricLoss(const Image& target, const Image& synth,
                        const PhotometricConfig& config = {},
                        const Mask* synth_valid = nullptr);

enum class Reduction { kAverage, kMinimum };

struct AggregatedLoss {
  LossMap loss;
  /// Index of the contributing source in minimum mode; -1 where no source is
  /// valid and everywhere in average mode.
  Grid<int> source;
};

/// Per-pixel mean or minimum over the sources valid at that pixel. Pixels with
/// no valid source are invalid in the output.
AggregatedLoss AggregateReconstruction(std::span<const LossMap> losses,
                                       Reduction mode);

/// [min synth loss < min identity loss]; true keeps the pixel. Ties remove it.
Mask StaticAutomask(std::span<const LossMap> synth_losses,
                    std::span<const LossMap> identity_losses);

struct PredictiveMask {
  enum class Kind { kExplainability, kUncertainty };
  Kind kind = Kind::kExplainability;
  /// Explainability in [0, 1]; uncertainty is an unbounded log-variance.
  Grid<double> values;
};

/// Explainability: M * L. Uncertainty: exp(-M) * L + M.
LossMap ApplyPredictiveMask(const LossMap& loss, const PredictiveMask& mask);

enum class FeatureDistance { kPhotometric, kL2 };

/// Warps every support feature map with its correspondences, takes the
/// per-pixel minimum distance over sources and averages over valid pixels.
double FeatureReconstructionLoss(const Image& target_features,
                                 std::span<const Image> support_features,
                                 std::span<const WarpField> warps,
                                 FeatureDistance distance,
                                 const PhotometricConfig& config = {});

/// Bilinear upsampling with half-pixel centers (edge-clamped), the usual
/// convention for resizing network outputs.
Grid<double> UpsampleBilinear(const Grid<double>& grid, int width, int height);

struct MultiScaleResult {
  double total = 0.0;
  std::vector<double> per_scale;
};

/// Upsamples each scale to full resolution, evaluates it and averages.
MultiScaleResult MultiScaleLoss(
    std::span<const DisparityMap> per_scale_disparities, int full_width,
    int full_height,
    const std::function<double(const DisparityMap&)>& loss_at_full_res);

}  // namespace depthbench
