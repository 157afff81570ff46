#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "depthbench/edges.h"
#include "depthbench/image_metrics.h"
#include "depthbench/pointcloud_metrics.h"
#include "depthbench/types.h"

namespace depthbench {

struct ManifestRecord {
  std::string name;
  std::filesystem::path image;  // optional, unused by the metric suites
  std::filesystem::path gt;
  std::optional<std::filesystem::path> sky_mask;
  std::optional<Intrinsics> intrinsics;  // width/height taken from the gt map
  /// Method name -> prediction path, in manifest order.
  std::vector<std::pair<std::string, std::filesystem::path>> predictions;
};

struct Manifest {
  std::vector<ManifestRecord> records;

  /// Method names in first-seen order.
  std::vector<std::string> Methods() const;
};

/// JSON manifest; relative paths resolve against the manifest's directory.
/// Throws if a referenced file does not exist or a record is malformed.
Manifest LoadManifest(const std::filesystem::path& path);

struct Suites {
  bool image = true;
  bool pointcloud = true;
  bool edge = false;

  /// Comma-separated subset of "image,pointcloud,edge".
  static Suites Parse(const std::string& text);
  std::string ToString() const;
};

/// Evaluation protocol. Defaults: per-image median scaling, 100 m cap, no
/// border crop, 10 cm point threshold, log-depth boundaries with sigma 1 and
/// a 10 px edge truncation.
struct Protocol {
  AlignmentMode alignment = AlignmentMode::Median();
  double min_depth = 1e-3;
  double max_depth = 100.0;
  Suites suites;
  BoundaryConfig boundaries;
  double edge_truncation = kDefaultEdgeTruncation;
  double point_threshold = kDefaultPointThreshold;
  bool legacy_sqrel = false;
  int jobs = 1;
  bool allow_partial = false;

  void Validate() const;
};

enum class Direction { kLowerIsBetter, kHigherIsBetter };

std::string ToString(Direction direction);
Direction ParseDirection(const std::string& text);

/// Ordered (name, value) pairs.
using MetricSet = std::vector<std::pair<std::string, double>>;

/// Metric names emitted by `protocol`, in report order.
std::vector<std::string> MetricNames(const Protocol& protocol);
/// Ranking direction of a metric name (including "Boundary/" variants).
Direction MetricDirection(const std::string& name);

struct ImageResult {
  std::string name;
  double scale = 1.0;
  MetricSet metrics;
};

struct MethodReport {
  std::string method;
  std::vector<ImageResult> images;
  /// Mean over images of each per-image metric.
  MetricSet aggregate;
};

struct RankColumn {
  std::string metric;
  Direction direction = Direction::kLowerIsBetter;
  std::vector<int> ranks;  // indexed like MetricReport::methods
  bool tie = false;
};

struct Failure {
  std::string record;
  std::string method;
  std::string message;
};

struct MetricReport {
  /// Protocol snapshot and interpretation notes, as key/value strings.
  std::vector<std::pair<std::string, std::string>> protocol;
  std::vector<std::string> metric_names;
  std::vector<MethodReport> methods;
  /// One column per metric name.
  std::vector<RankColumn> ranks;
  std::vector<Failure> failures;

  const RankColumn& RankFor(const std::string& metric) const;
};

/// Thrown when images fail and partial results were not allowed.
class EvaluationFailed : public Error {
 public:
  explicit EvaluationFailed(std::vector<Failure> failures);
  const std::vector<Failure>& failures() const { return failures_; }

 private:
  std::vector<Failure> failures_;
};

/// Per-image metric computation for one prediction against its ground truth.
ImageResult EvaluateImage(const std::string& name, const DepthMap& pred,
                          const DepthMap& gt, const Mask* sky,
                          const std::optional<Intrinsics>& K, const Protocol& protocol);

/// Loads, aligns, clamps and scores every (record, method) pair, then
/// aggregates per method and ranks methods on every metric. Records are
/// processed in parallel; results do not depend on the worker count.
MetricReport RunEvaluation(const Manifest& manifest, const Protocol& protocol);

struct RankResult {
  std::vector<int> ranks;
  bool tie = false;
};

/// Dense ranking (1 = best); equal values share a rank and set `tie`.
RankResult RankMethods(std::span<const double> values, Direction direction);

/// Ranks the report's methods on `metric`. Throws if the metric is missing.
RankResult RankMethods(const MetricReport& report, const std::string& metric,
                       Direction direction);

/// Value rounded to 6 significant digits, the precision of every emitted float.
double RoundSignificant(double value);

}  // namespace depthbench
