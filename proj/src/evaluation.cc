#include "depthbench/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "depthbench/geometry.h"
#include "depthbench/io.h"

namespace depthbench {

namespace {

const std::vector<std::string>& ImageMetricNames() {
  static const std::vector<std::string> names = {
      "MAE",    "RMSE",  "InvMAE", "InvRMSE",      "LogMAE",      "LogRMSE",     "LogSI",
      "AbsRel", "SqRel", "SqRel-Legacy", "Delta<1.25", "Delta<1.25^2", "Delta<1.25^3"};
  return names;
}

const std::vector<std::string>& PointcloudMetricNames() {
  static const std::vector<std::string> names = {"Chamfer", "Precision", "Recall", "F-Score",
                                                 "IoU"};
  return names;
}

constexpr const char* kBoundaryPrefix = "Boundary/";

void AppendImageMetrics(MetricSet& out, const ImageMetrics& m, bool legacy,
                        const std::string& prefix = "") {
  out.emplace_back(prefix + "MAE", m.mae);
  out.emplace_back(prefix + "RMSE", m.rmse);
  out.emplace_back(prefix + "InvMAE", m.inv_mae);
  out.emplace_back(prefix + "InvRMSE", m.inv_rmse);
  out.emplace_back(prefix + "LogMAE", m.log_mae);
  out.emplace_back(prefix + "LogRMSE", m.log_rmse);
  out.emplace_back(prefix + "LogSI", m.log_si);
  out.emplace_back(prefix + "AbsRel", m.abs_rel);
  out.emplace_back(prefix + "SqRel", m.sq_rel);
  if (legacy) out.emplace_back(prefix + "SqRel-Legacy", m.sq_rel_legacy);
  out.emplace_back(prefix + "Delta<1.25", m.delta1);
  out.emplace_back(prefix + "Delta<1.25^2", m.delta2);
  out.emplace_back(prefix + "Delta<1.25^3", m.delta3);
}

void AppendPointcloudMetrics(MetricSet& out, const PointcloudMetrics& m,
                             const std::string& prefix = "") {
  out.emplace_back(prefix + "Chamfer", m.chamfer);
  out.emplace_back(prefix + "Precision", m.precision);
  out.emplace_back(prefix + "Recall", m.recall);
  out.emplace_back(prefix + "F-Score", m.f_score);
  out.emplace_back(prefix + "IoU", m.iou);
}

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void RequireFile(const std::filesystem::path& path) {
  Check(std::filesystem::is_regular_file(path), "missing file: " + path.string());
}

}  // namespace

std::vector<std::string> Manifest::Methods() const {
  std::vector<std::string> methods;
  for (const ManifestRecord& r : records) {
    for (const auto& [method, path] : r.predictions) {
      if (std::find(methods.begin(), methods.end(), method) == methods.end()) {
        methods.push_back(method);
      }
    }
  }
  return methods;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  Check(static_cast<bool>(in), "cannot read manifest " + path.string());
  nlohmann::ordered_json json;
  try {
    json = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed manifest " + path.string() + ": " + e.what());
  }
  const std::filesystem::path base = path.parent_path();

  Manifest manifest;
  try {
    for (const auto& r : json.at("records")) {
      ManifestRecord record;
      record.name = r.at("name").get<std::string>();
      record.gt = Resolve(base, r.at("gt").get<std::string>());
      RequireFile(record.gt);
      if (r.contains("image")) {
        record.image = Resolve(base, r.at("image").get<std::string>());
        RequireFile(record.image);
      }
      if (r.contains("sky_mask")) {
        record.sky_mask = Resolve(base, r.at("sky_mask").get<std::string>());
        RequireFile(*record.sky_mask);
      }
      if (r.contains("intrinsics")) {
        const auto& k = r.at("intrinsics");
        Intrinsics K;
        K.fx = k.at("fx").get<double>();
        K.fy = k.at("fy").get<double>();
        K.cx = k.at("cx").get<double>();
        K.cy = k.at("cy").get<double>();
        record.intrinsics = K;
      }
      for (const auto& [method, p] : r.at("predictions").items()) {
        const std::filesystem::path pred = Resolve(base, p.get<std::string>());
        RequireFile(pred);
        record.predictions.emplace_back(method, pred);
      }
      Check(!record.predictions.empty(), "record '" + record.name + "' has no predictions");
      manifest.records.push_back(std::move(record));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed manifest " + path.string() + ": " + e.what());
  }
  Check(!manifest.records.empty(), "manifest " + path.string() + " has no records");
  return manifest;
}

Suites Suites::Parse(const std::string& text) {
  Suites s{false, false, false};
  std::stringstream ss(text);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    if (item == "image") {
      s.image = true;
    } else if (item == "pointcloud") {
      s.pointcloud = true;
    } else if (item == "edge") {
      s.edge = true;
    } else {
      throw Error("unknown metric suite '" + item + "'");
    }
    any = true;
  }
  Check(any, "at least one metric suite is required");
  return s;
}

std::string Suites::ToString() const {
  std::vector<std::string> parts;
  if (image) parts.emplace_back("image");
  if (pointcloud) parts.emplace_back("pointcloud");
  if (edge) parts.emplace_back("edge");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

void Protocol::Validate() const {
  Check(min_depth > 0.0 && min_depth < max_depth, "invalid evaluation depth range");
  Check(suites.image || suites.pointcloud || suites.edge, "no metric suite enabled");
  Check(edge_truncation > 0.0, "edge truncation must be positive");
  Check(point_threshold > 0.0, "point threshold must be positive");
  Check(jobs >= 1, "at least one worker is required");
  boundaries.Validate();
}

std::string ToString(Direction direction) {
  return direction == Direction::kLowerIsBetter ? "lower" : "higher";
}

Direction ParseDirection(const std::string& text) {
  if (text == "lower") return Direction::kLowerIsBetter;
  if (text == "higher") return Direction::kHigherIsBetter;
  throw Error("unknown ranking direction '" + text + "'");
}

std::vector<std::string> MetricNames(const Protocol& protocol) {
  std::vector<std::string> names;
  auto image_names = [&](const std::string& prefix) {
    for (const std::string& n : ImageMetricNames()) {
      if (n == "SqRel-Legacy" && !protocol.legacy_sqrel) continue;
      names.push_back(prefix + n);
    }
  };
  auto cloud_names = [&](const std::string& prefix) {
    for (const std::string& n : PointcloudMetricNames()) names.push_back(prefix + n);
  };
  if (protocol.suites.image) image_names("");
  if (protocol.suites.pointcloud) cloud_names("");
  if (protocol.suites.edge) {
    names.emplace_back("EdgeAcc");
    names.emplace_back("EdgeComp");
    image_names(kBoundaryPrefix);
    if (protocol.suites.pointcloud) cloud_names(kBoundaryPrefix);
  }
  return names;
}

Direction MetricDirection(const std::string& name) {
  std::string base = name;
  if (base.rfind(kBoundaryPrefix, 0) == 0) base = base.substr(std::string(kBoundaryPrefix).size());
  static const std::vector<std::string> higher = {"Delta<1.25", "Delta<1.25^2", "Delta<1.25^3",
                                                  "Precision",  "Recall",       "F-Score",
                                                  "IoU"};
  return std::find(higher.begin(), higher.end(), base) != higher.end()
             ? Direction::kHigherIsBetter
             : Direction::kLowerIsBetter;
}

const RankColumn& MetricReport::RankFor(const std::string& metric) const {
  for (const RankColumn& column : ranks) {
    if (column.metric == metric) return column;
  }
  throw Error("report has no metric '" + metric + "'");
}

EvaluationFailed::EvaluationFailed(std::vector<Failure> failures)
    : Error([&] {
        std::string msg = std::to_string(failures.size()) + " image(s) failed:";
        for (const Failure& f : failures) {
          msg += "\n  " + f.record + " [" + f.method + "]: " + f.message;
        }
        return msg;
      }()),
      failures_(std::move(failures)) {}

ImageResult EvaluateImage(const std::string& name, const DepthMap& pred, const DepthMap& gt,
                          const Mask* sky, const std::optional<Intrinsics>& K,
                          const Protocol& protocol) {
  Check(pred.depth.SameShape(gt.depth), "prediction and ground truth differ in shape");
  pred.Validate();
  gt.Validate();

  const Mask mask = EvaluationMask(gt, protocol.min_depth, protocol.max_depth);
  Check(CountTrue(mask) > 0, "no ground-truth pixels inside the evaluation range");
  const AlignedPrediction aligned = AlignPrediction(pred, gt, protocol.alignment, &mask);
  const ClampedPair clamped =
      ClampAndMask(aligned.depth, gt, protocol.min_depth, protocol.max_depth);

  std::optional<Intrinsics> camera;
  if (protocol.suites.pointcloud) {
    Check(K.has_value(), "the pointcloud suite requires intrinsics");
    camera = *K;
    camera->width = gt.width();
    camera->height = gt.height();
    camera->Validate();
  }

  ImageResult result{name, aligned.scale, {}};
  if (protocol.suites.image) {
    AppendImageMetrics(result.metrics,
                       ComputeImageMetrics(clamped.pred, clamped.gt, clamped.mask),
                       protocol.legacy_sqrel);
  }
  if (protocol.suites.pointcloud) {
    AppendPointcloudMetrics(
        result.metrics,
        ComputePointcloudMetrics(Backproject(clamped.pred, *camera, &clamped.mask),
                                 Backproject(clamped.gt, *camera, &clamped.mask),
                                 protocol.point_threshold));
  }
  if (protocol.suites.edge) {
    const EdgeMap gt_edges = ExtractDepthBoundaries(gt, sky, protocol.boundaries);
    const EdgeMap pred_edges = ExtractDepthBoundaries(clamped.pred, nullptr, protocol.boundaries);
    const EdgeMetrics edge =
        EdgeAccuracyCompleteness(pred_edges.edges, gt_edges.edges, protocol.edge_truncation);
    result.metrics.emplace_back("EdgeAcc", edge.accuracy);
    result.metrics.emplace_back("EdgeComp", edge.completeness);

    const BoundaryMetrics boundary = BoundaryMaskedMetrics(
        clamped.pred, clamped.gt, clamped.mask, gt_edges.edges,
        camera ? &*camera : nullptr, protocol.point_threshold);
    AppendImageMetrics(result.metrics, boundary.image, protocol.legacy_sqrel, kBoundaryPrefix);
    if (boundary.pointcloud) {
      AppendPointcloudMetrics(result.metrics, *boundary.pointcloud, kBoundaryPrefix);
    }
  }
  return result;
}

namespace {

struct RecordOutcome {
  std::vector<std::optional<ImageResult>> results;  // indexed by method
  std::vector<std::string> errors;                  // indexed by method
};

RecordOutcome EvaluateRecord(const ManifestRecord& record,
                             const std::vector<std::string>& methods,
                             const Protocol& protocol) {
  RecordOutcome outcome;
  outcome.results.resize(methods.size());
  outcome.errors.resize(methods.size());

  DepthMap gt;
  std::optional<Mask> sky;
  try {
    gt = LoadDepth(record.gt);
    if (record.sky_mask) {
      sky = LoadMaskPng(*record.sky_mask);
      Check(sky->SameShape(gt.depth), "sky mask and ground truth differ in shape");
    }
  } catch (const Error& e) {
    std::fill(outcome.errors.begin(), outcome.errors.end(), e.what());
    return outcome;
  }

  for (std::size_t m = 0; m < methods.size(); ++m) {
    const auto it = std::find_if(record.predictions.begin(), record.predictions.end(),
                                 [&](const auto& p) { return p.first == methods[m]; });
    if (it == record.predictions.end()) {
      outcome.errors[m] = "no prediction for this method";
      continue;
    }
    try {
      const DepthMap pred = LoadDepth(it->second);
      outcome.results[m] = EvaluateImage(record.name, pred, gt, sky ? &*sky : nullptr,
                                         record.intrinsics, protocol);
    } catch (const Error& e) {
      outcome.errors[m] = e.what();
    }
  }
  return outcome;
}

std::vector<std::pair<std::string, std::string>> ProtocolSnapshot(const Protocol& p) {
  std::vector<std::pair<std::string, std::string>> s = {
      {"alignment", p.alignment.ToString()},
      {"min_depth", FormatNumber(p.min_depth)},
      {"max_depth", FormatNumber(p.max_depth)},
      {"border_crop", "none"},
      {"suites", p.suites.ToString()},
      {"legacy_sqrel", p.legacy_sqrel ? "true" : "false"},
      {"aggregation", "mean of per-image metrics"},
  };
  if (p.suites.pointcloud) {
    s.emplace_back("point_threshold", FormatNumber(p.point_threshold));
    s.emplace_back("pointcloud_pixels", "valid ground truth inside the range, both clouds");
  }
  if (p.suites.edge) {
    s.emplace_back("edge_transform", ToString(p.boundaries.transform));
    s.emplace_back("edge_sigma", FormatNumber(p.boundaries.sigma));
    s.emplace_back("edge_hysteresis",
                   FormatNumber(p.boundaries.low_ratio) + "," + FormatNumber(p.boundaries.high_ratio));
    s.emplace_back("edge_truncation", FormatNumber(p.edge_truncation));
    s.emplace_back("edge_accuracy", "predicted edges to ground-truth edges");
    s.emplace_back("boundary_pixels", "ground-truth edges, both clouds restricted");
  }
  return s;
}

}  // namespace

MetricReport RunEvaluation(const Manifest& manifest, const Protocol& protocol) {
  protocol.Validate();
  Check(!manifest.records.empty(), "manifest has no records");
  const std::vector<std::string> methods = manifest.Methods();
  Check(!methods.empty(), "manifest has no methods");

  std::vector<RecordOutcome> outcomes(manifest.records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < outcomes.size(); i = next++) {
      outcomes[i] = EvaluateRecord(manifest.records[i], methods, protocol);
    }
  };
  const auto workers = std::min<std::size_t>(protocol.jobs, outcomes.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  MetricReport report;
  report.protocol = ProtocolSnapshot(protocol);
  report.metric_names = MetricNames(protocol);
  for (const std::string& method : methods) report.methods.push_back({method, {}, {}});

  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      if (outcomes[r].results[m]) {
        report.methods[m].images.push_back(std::move(*outcomes[r].results[m]));
      } else {
        report.failures.push_back({manifest.records[r].name, methods[m], outcomes[r].errors[m]});
      }
    }
  }
  if (!report.failures.empty() && !protocol.allow_partial) {
    throw EvaluationFailed(report.failures);
  }

  for (MethodReport& method : report.methods) {
    Check(!method.images.empty(), "method '" + method.method + "' has no evaluated images");
    for (std::size_t k = 0; k < report.metric_names.size(); ++k) {
      double sum = 0.0;
      for (const ImageResult& image : method.images) {
        Check(image.metrics.size() == report.metric_names.size() &&
                  image.metrics[k].first == report.metric_names[k],
              "inconsistent per-image metric sets");
        sum += image.metrics[k].second;
      }
      method.aggregate.emplace_back(report.metric_names[k],
                                    sum / static_cast<double>(method.images.size()));
    }
  }

  for (std::size_t k = 0; k < report.metric_names.size(); ++k) {
    const std::string& name = report.metric_names[k];
    std::vector<double> values;
    for (const MethodReport& method : report.methods) {
      values.push_back(RoundSignificant(method.aggregate[k].second));
    }
    const Direction direction = MetricDirection(name);
    RankResult ranked = RankMethods(values, direction);
    report.ranks.push_back({name, direction, std::move(ranked.ranks), ranked.tie});
  }
  return report;
}

RankResult RankMethods(std::span<const double> values, Direction direction) {
  Check(!values.empty(), "ranking requires at least one method");
  for (double v : values) Check(std::isfinite(v), "cannot rank non-finite values");

  std::vector<double> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (direction == Direction::kHigherIsBetter) std::reverse(distinct.begin(), distinct.end());

  RankResult result;
  result.tie = distinct.size() < values.size();
  for (double v : values) {
    const auto pos = std::find(distinct.begin(), distinct.end(), v);
    result.ranks.push_back(static_cast<int>(pos - distinct.begin()) + 1);
  }
  return result;
}

RankResult RankMethods(const MetricReport& report, const std::string& metric,
                       Direction direction) {
  const auto it = std::find(report.metric_names.begin(), report.metric_names.end(), metric);
  Check(it != report.metric_names.end(), "report has no metric '" + metric + "'");
  const auto k = static_cast<std::size_t>(it - report.metric_names.begin());
  std::vector<double> values;
  for (const MethodReport& method : report.methods) {
    values.push_back(RoundSignificant(method.aggregate.at(k).second));
  }
  return RankMethods(values, direction);
}

double RoundSignificant(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return std::strtod(buf, nullptr);
}

}  // namespace depthbench
