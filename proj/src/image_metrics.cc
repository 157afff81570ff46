#include "depthbench/image_metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace depthbench {

namespace {

double Median(std::vector<double> values) {
  Check(!values.empty(), "median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace

AlignmentMode AlignmentMode::Fixed(double s) {
  Check(std::isfinite(s) && s > 0.0, "fixed alignment scale must be positive");
  return {Kind::kFixed, s};
}

AlignmentMode AlignmentMode::Parse(const std::string& text) {
  if (text == "median") return Median();
  if (text == "none") return None();
  const std::string prefix = "fixed:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double scale = 0.0;
    try {
      scale = std::stod(text.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      throw Error("invalid fixed alignment scale in '" + text + "'");
    }
    Check(used == text.size() - prefix.size(),
          "invalid fixed alignment scale in '" + text + "'");
    return Fixed(scale);
  }
  throw Error("unknown alignment mode '" + text + "'");
}

std::string AlignmentMode::ToString() const {
  switch (kind) {
    case Kind::kMedian:
      return "median";
    case Kind::kNone:
      return "none";
    case Kind::kFixed: {
      // Shortest text that parses back to the same scale.
      char buf[64];
      for (int digits = 6; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof(buf), "%.*g", digits, scale);
        if (std::strtod(buf, nullptr) == scale) break;
      }
      return std::string("fixed:") + buf;
    }
  }
  return "none";
}

AlignedPrediction AlignPrediction(const DepthMap& pred, const DepthMap& gt,
                                  const AlignmentMode& mode, const Mask* mask) {
  Check(pred.depth.SameShape(gt.depth), "prediction and ground truth differ in shape");
  if (mask) Check(mask->SameShape(gt.depth), "mask shape mismatch");

  AlignedPrediction out{pred, 1.0};
  switch (mode.kind) {
    case AlignmentMode::Kind::kNone:
      return out;
    case AlignmentMode::Kind::kFixed:
      out.scale = mode.scale;
      break;
    case AlignmentMode::Kind::kMedian: {
      std::vector<double> p;
      std::vector<double> g;
      for (std::size_t i = 0; i < pred.depth.size(); ++i) {
        if (!pred.valid[i] || !gt.valid[i] || (mask && !(*mask)[i])) continue;
        p.push_back(pred.depth[i]);
        g.push_back(gt.depth[i]);
      }
      Check(!p.empty(), "median alignment requires jointly valid pixels");
      const double pred_median = Median(std::move(p));
      Check(pred_median > 0.0, "median of the prediction is zero");
      out.scale = Median(std::move(g)) / pred_median;
      break;
    }
  }
  for (std::size_t i = 0; i < out.depth.depth.size(); ++i) {
    if (out.depth.valid[i]) out.depth.depth[i] *= out.scale;
  }
  return out;
}

Mask EvaluationMask(const DepthMap& gt, double min_depth, double max_depth) {
  Check(min_depth > 0.0 && min_depth < max_depth, "invalid evaluation depth range");
  Mask mask(gt.width(), gt.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double d = gt.depth[i];
    mask[i] = (gt.valid[i] && d >= min_depth && d <= max_depth) ? 1 : 0;
  }
  return mask;
}

ClampedPair ClampAndMask(const DepthMap& pred, const DepthMap& gt,
                         double min_depth, double max_depth) {
  Check(pred.depth.SameShape(gt.depth), "prediction and ground truth differ in shape");
  ClampedPair out{pred, gt, EvaluationMask(gt, min_depth, max_depth)};
  for (std::size_t i = 0; i < out.pred.depth.size(); ++i) {
    if (out.pred.valid[i]) {
      out.pred.depth[i] = std::clamp(out.pred.depth[i], min_depth, max_depth);
    }
  }
  return out;
}

ImageMetrics ComputeImageMetrics(const DepthMap& pred, const DepthMap& gt,
                                 const Mask& mask) {
  Check(pred.depth.SameShape(gt.depth) && mask.SameShape(gt.depth),
        "prediction, ground truth and mask differ in shape");

  struct Sums {
    double abs = 0, sq = 0, inv_abs = 0, inv_sq = 0, log_abs = 0, log_sq = 0;
    double log_signed = 0, rel = 0, sq_rel = 0, sq_rel_legacy = 0;
    std::size_t d1 = 0, d2 = 0, d3 = 0;
  } s;
  std::vector<double> log_errors;

  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    Check(gt.valid[i], "evaluation mask includes invalid ground truth");
    Check(pred.valid[i], "prediction is missing at an evaluated pixel");
    const double p = pred.depth[i];
    const double y = gt.depth[i];
    const double e = p - y;
    const double inv_e = 1.0 / p - 1.0 / y;
    const double log_e = std::log(p) - std::log(y);

    s.abs += std::abs(e);
    s.sq += e * e;
    s.inv_abs += std::abs(inv_e);
    s.inv_sq += inv_e * inv_e;
    s.log_abs += std::abs(log_e);
    s.log_sq += log_e * log_e;
    s.log_signed += log_e;
    s.rel += std::abs(e) / y;
    s.sq_rel += (e * e) / (y * y);
    s.sq_rel_legacy += (e * e) / y;
    log_errors.push_back(log_e);

    const double ratio = std::max(p / y, y / p);
    if (ratio < 1.25) ++s.d1;
    if (ratio < 1.25 * 1.25) ++s.d2;
    if (ratio < 1.25 * 1.25 * 1.25) ++s.d3;
  }
  Check(!log_errors.empty(), "evaluation mask is empty");

  const double n = static_cast<double>(log_errors.size());
  const double log_mean = s.log_signed / n;
  // Centered second pass: the textbook E[d^2] - E[d]^2 loses every digit when
  // the prediction is a scaled copy of the ground truth.
  double log_var = 0.0;
  for (double d : log_errors) log_var += (d - log_mean) * (d - log_mean);
  log_var /= n;

  ImageMetrics m;
  m.mae = s.abs / n;
  m.rmse = std::sqrt(s.sq / n);
  m.inv_mae = s.inv_abs / n;
  m.inv_rmse = std::sqrt(s.inv_sq / n);
  m.log_mae = s.log_abs / n;
  m.log_rmse = std::sqrt(s.log_sq / n);
  m.log_si = std::sqrt(log_var);
  m.abs_rel = s.rel / n;
  m.sq_rel = s.sq_rel / n;
  m.sq_rel_legacy = s.sq_rel_legacy / n;
  m.delta1 = 100.0 * static_cast<double>(s.d1) / n;
  m.delta2 = 100.0 * static_cast<double>(s.d2) / n;
  m.delta3 = 100.0 * static_cast<double>(s.d3) / n;
  return m;
}

}  // namespace depthbench
