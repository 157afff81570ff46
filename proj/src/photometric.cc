#include "depthbench/photometric.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace depthbench {

namespace {

// Box mean over a (2r+1)^2 window with replicate padding.
Grid<double> BoxMean(const Grid<double>& in, int radius) {
  const int w = in.width();
  const int h = in.height();
  Grid<double> out(w, h);
  const double norm = 1.0 / ((2 * radius + 1) * (2 * radius + 1));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -radius; dx <= radius; ++dx) {
          sum += in(std::clamp(x + dx, 0, w - 1), yy);
        }
      }
      out(x, y) = sum * norm;
    }
  }
  return out;
}

Grid<double> Multiply(const Grid<double>& a, const Grid<double>& b) {
  Grid<double> out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

void CheckSameShapes(std::span<const LossMap> maps) {
  Check(!maps.empty(), "at least one loss map is required");
  for (const LossMap& m : maps) {
    Check(m.values.SameShape(maps.front().values) && m.valid.SameShape(m.values),
          "loss map shape mismatch");
  }
}

}  // namespace

double LossMap::Mean(const Mask* keep) const {
  if (keep) Check(keep->SameShape(values), "mask shape mismatch");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!valid[i] || (keep && !(*keep)[i])) continue;
    sum += values[i];
    ++count;
  }
  Check(count > 0, "loss map has no valid pixels");
  return sum / static_cast<double>(count);
}

void PhotometricConfig::Validate() const {
  Check(ssim_weight >= 0.0 && ssim_weight <= 1.0, "SSIM weight must be in [0, 1]");
  Check(ssim_window >= 1 && ssim_window % 2 == 1, "SSIM window must be odd");
  Check(ssim_c1 > 0.0 && ssim_c2 > 0.0, "SSIM stabilizers must be positive");
}

Image Ssim(const Image& a, const Image& b, const PhotometricConfig& config) {
  config.Validate();
  Check(a.SameShape(b), "SSIM inputs differ in shape");
  const int radius = config.ssim_window / 2;
  const double c1 = config.ssim_c1;
  const double c2 = config.ssim_c2;

  Image out(a.width(), a.height(), a.channels());
  for (int c = 0; c < a.channels(); ++c) {
    const Grid<double> x = a.Channel(c);
    const Grid<double> y = b.Channel(c);
    const Grid<double> mu_x = BoxMean(x, radius);
    const Grid<double> mu_y = BoxMean(y, radius);
    const Grid<double> xx = BoxMean(Multiply(x, x), radius);
    const Grid<double> yy = BoxMean(Multiply(y, y), radius);
    const Grid<double> xy = BoxMean(Multiply(x, y), radius);

    Grid<double> ssim(a.width(), a.height());
    for (std::size_t i = 0; i < ssim.size(); ++i) {
      const double var_x = xx[i] - mu_x[i] * mu_x[i];
      const double var_y = yy[i] - mu_y[i] * mu_y[i];
      const double cov = xy[i] - mu_x[i] * mu_y[i];
      const double num = (2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * cov + c2);
      const double den =
          (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (var_x + var_y + c2);
      ssim[i] = std::clamp(num / den, -1.0, 1.0);
    }
    out.SetChannel(c, ssim);
  }
  return out;
}

LossMap PhotometricLoss(const Image& target, const Image& synth,
                        const PhotometricConfig& config,
                        const Mask* synth_valid) {
  Check(target.SameShape(synth), "photometric inputs differ in shape");
  const Image ssim = Ssim(target, synth, config);
  const double alpha = config.ssim_weight;

  LossMap loss(target.width(), target.height());
  if (synth_valid) {
    Check(synth_valid->width() == target.width() &&
              synth_valid->height() == target.height(),
          "validity mask shape mismatch");
    loss.valid = *synth_valid;
  }
  for (int y = 0; y < target.height(); ++y) {
    for (int x = 0; x < target.width(); ++x) {
      double sum = 0.0;
      for (int c = 0; c < target.channels(); ++c) {
        const double structural = (1.0 - ssim.at(x, y, c)) / 2.0;
        const double absolute = std::abs(target.at(x, y, c) - synth.at(x, y, c));
        sum += alpha * structural + (1.0 - alpha) * absolute;
      }
      loss.values(x, y) = sum / target.channels();
    }
  }
  return loss;
}

AggregatedLoss AggregateReconstruction(std::span<const LossMap> losses,
                                       Reduction mode) {
  CheckSameShapes(losses);
  const int w = losses.front().width();
  const int h = losses.front().height();

  AggregatedLoss out{LossMap(w, h), Grid<int>(w, h, -1)};
  for (std::size_t i = 0; i < out.loss.values.size(); ++i) {
    double sum = 0.0;
    double best = std::numeric_limits<double>::infinity();
    int best_source = -1;
    int count = 0;
    for (std::size_t s = 0; s < losses.size(); ++s) {
      if (!losses[s].valid[i]) continue;
      const double v = losses[s].values[i];
      sum += v;
      ++count;
      if (v < best) {
        best = v;
        best_source = static_cast<int>(s);
      }
    }
    if (count == 0) {
      out.loss.valid[i] = 0;
      out.loss.values[i] = 0.0;
      continue;
    }
    if (mode == Reduction::kAverage) {
      out.loss.values[i] = sum / count;
    } else {
      out.loss.values[i] = best;
      out.source[i] = best_source;
    }
  }
  return out;
}

Mask StaticAutomask(std::span<const LossMap> synth_losses,
                    std::span<const LossMap> identity_losses) {
  CheckSameShapes(synth_losses);
  CheckSameShapes(identity_losses);
  Check(synth_losses.front().values.SameShape(identity_losses.front().values),
        "synthesized and identity losses differ in shape");

  const LossMap synth =
      AggregateReconstruction(synth_losses, Reduction::kMinimum).loss;
  const LossMap identity =
      AggregateReconstruction(identity_losses, Reduction::kMinimum).loss;

  Mask keep(synth.width(), synth.height());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (!synth.valid[i]) continue;
    // An identity loss that is unavailable cannot beat the warp.
    keep[i] = (!identity.valid[i] || synth.values[i] < identity.values[i]) ? 1 : 0;
  }
  return keep;
}

LossMap ApplyPredictiveMask(const LossMap& loss, const PredictiveMask& mask) {
  Check(mask.values.SameShape(loss.values), "predictive mask shape mismatch");
  LossMap out = loss;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double m = mask.values[i];
    if (mask.kind == PredictiveMask::Kind::kExplainability) {
      Check(m >= 0.0 && m <= 1.0, "explainability mask values must be in [0, 1]");
      out.values[i] = m * loss.values[i];
    } else {
      Check(std::isfinite(m), "uncertainty mask values must be finite");
      out.values[i] = std::exp(-m) * loss.values[i] + m;
    }
  }
  return out;
}

double FeatureReconstructionLoss(const Image& target_features,
                                 std::span<const Image> support_features,
                                 std::span<const WarpField> warps,
                                 FeatureDistance distance,
                                 const PhotometricConfig& config) {
  Check(!support_features.empty(), "at least one support feature map is required");
  Check(support_features.size() == warps.size(),
        "one warp field is required per support feature map");

  std::vector<LossMap> losses;
  losses.reserve(support_features.size());
  for (std::size_t s = 0; s < support_features.size(); ++s) {
    Check(support_features[s].channels() == target_features.channels(),
          "feature channel count mismatch");
    Check(warps[s].width() == target_features.width() &&
              warps[s].height() == target_features.height(),
          "warp field does not match target features");
    const WarpedImage warped = Warp(support_features[s], warps[s]);

    if (distance == FeatureDistance::kPhotometric) {
      losses.push_back(
          PhotometricLoss(target_features, warped.image, config, &warped.valid));
      continue;
    }
    LossMap l2(target_features.width(), target_features.height());
    l2.valid = warped.valid;
    for (int y = 0; y < l2.height(); ++y) {
      for (int x = 0; x < l2.width(); ++x) {
        double sq = 0.0;
        for (int c = 0; c < target_features.channels(); ++c) {
          const double d = target_features.at(x, y, c) - warped.image.at(x, y, c);
          sq += d * d;
        }
        l2.values(x, y) = std::sqrt(sq);
      }
    }
    losses.push_back(std::move(l2));
  }
  return AggregateReconstruction(losses, Reduction::kMinimum).loss.Mean();
}

Grid<double> UpsampleBilinear(const Grid<double>& grid, int width, int height) {
  Check(!grid.empty() && width > 0 && height > 0, "invalid upsampling shape");
  if (grid.width() == width && grid.height() == height) return grid;

  const double sx = static_cast<double>(grid.width()) / width;
  const double sy = static_cast<double>(grid.height()) / height;
  Grid<double> out(width, height);
  for (int y = 0; y < height; ++y) {
    const double v = std::clamp((y + 0.5) * sy - 0.5, 0.0, grid.height() - 1.0);
    const int y0 = static_cast<int>(v);
    const int y1 = std::min(y0 + 1, grid.height() - 1);
    const double wy = v - y0;
    for (int x = 0; x < width; ++x) {
      const double u = std::clamp((x + 0.5) * sx - 0.5, 0.0, grid.width() - 1.0);
      const int x0 = static_cast<int>(u);
      const int x1 = std::min(x0 + 1, grid.width() - 1);
      const double wx = u - x0;
      const double top = (1.0 - wx) * grid(x0, y0) + wx * grid(x1, y0);
      const double bottom = (1.0 - wx) * grid(x0, y1) + wx * grid(x1, y1);
      out(x, y) = (1.0 - wy) * top + wy * bottom;
    }
  }
  return out;
}

MultiScaleResult MultiScaleLoss(
    std::span<const DisparityMap> per_scale_disparities, int full_width,
    int full_height,
    const std::function<double(const DisparityMap&)>& loss_at_full_res) {
  Check(!per_scale_disparities.empty(), "at least one scale is required");
  MultiScaleResult result;
  for (const DisparityMap& disp : per_scale_disparities) {
    const int w = disp.width();
    const int h = disp.height();
    Check(w > 0 && h > 0 && full_width % w == 0 && full_height % h == 0,
          "scale shape does not divide the full resolution");
    const int factor = full_width / w;
    Check(full_height / h == factor && (factor & (factor - 1)) == 0,
          "scales must be power-of-two downsamplings of the full resolution");
    const DisparityMap upsampled(UpsampleBilinear(disp.values, full_width, full_height));
    result.per_scale.push_back(loss_at_full_res(upsampled));
  }
  double sum = 0.0;
  for (double v : result.per_scale) sum += v;
  result.total = sum / static_cast<double>(result.per_scale.size());
  return result;
}

}  // namespace depthbench
