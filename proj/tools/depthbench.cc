#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "depthbench/edges.h"
#include "depthbench/evaluation.h"
#include "depthbench/geometry.h"
#include "depthbench/io.h"
#include "depthbench/panorama.h"
#include "depthbench/photometric.h"
#include "depthbench/regression.h"
#include "depthbench/regularizers.h"
#include "depthbench/report.h"

namespace fs = std::filesystem;
using namespace depthbench;

namespace {

struct EvalOptions {
  std::string manifest;
  std::string align = "median";
  double min_depth = 1e-3;
  double max_depth = 100.0;
  std::string suites = "image,pointcloud";
  std::string edge_transform = "log";
  double edge_sigma = 1.0;
  double edge_trunc = kDefaultEdgeTruncation;
  double tau3d = kDefaultPointThreshold;
  bool legacy_sqrel = false;
  std::string out = "report";
  std::string format = "json,csv,markdown";
  int jobs = 1;
  bool allow_partial = false;
};

int RunEval(const EvalOptions& o) {
  Protocol protocol;
  protocol.alignment = AlignmentMode::Parse(o.align);
  protocol.min_depth = o.min_depth;
  protocol.max_depth = o.max_depth;
  protocol.suites = Suites::Parse(o.suites);
  protocol.boundaries.transform = ParseDepthTransform(o.edge_transform);
  protocol.boundaries.sigma = o.edge_sigma;
  protocol.edge_truncation = o.edge_trunc;
  protocol.point_threshold = o.tau3d;
  protocol.legacy_sqrel = o.legacy_sqrel;
  protocol.jobs = o.jobs;
  protocol.allow_partial = o.allow_partial;
  const std::vector<ReportFormat> formats = ParseReportFormats(o.format);

  const Manifest manifest = LoadManifest(o.manifest);
  const MetricReport report = RunEvaluation(manifest, protocol);
  for (const fs::path& path : EmitReport(report, o.out, formats)) {
    std::cout << "wrote " << path.string() << '\n';
  }
  for (const Failure& f : report.failures) {
    std::cerr << "failed: " << f.record << " [" << f.method << "]: " << f.message << '\n';
  }
  return 0;
}

struct BoundaryOptions {
  std::string depth;
  std::string sky;
  std::string transform = "log";
  double sigma = 1.0;
  double low = 0.1;
  double high = 0.2;
  double sky_depth = 100.0;
  std::string out = "edges.pgm";
};

int RunBoundaries(const BoundaryOptions& o) {
  BoundaryConfig config;
  config.transform = ParseDepthTransform(o.transform);
  config.sigma = o.sigma;
  config.low_ratio = o.low;
  config.high_ratio = o.high;
  config.sky_depth = o.sky_depth;

  const DepthMap depth = LoadDepth(o.depth);
  std::optional<Mask> sky;
  if (!o.sky.empty()) sky = LoadMaskPng(o.sky);
  const EdgeMap edges = ExtractDepthBoundaries(depth, sky ? &*sky : nullptr, config);
  WriteEdgePgm(edges.edges, o.out);
  std::cout << "edge pixels: " << CountTrue(edges.edges) << '\n'
            << "wrote " << o.out << '\n';
  return 0;
}

struct PatchOptions {
  std::string depth;
  std::string image;
  int step = 20;
  int width = 1242;
  int height = 376;
  double fx = 721.5;
  double fy = 721.5;
  std::optional<double> cx;
  std::optional<double> cy;
  bool planar = false;
  std::string scene = "scene";
  std::string out = "patches";
};

int RunPatches(const PatchOptions& o) {
  Panorama pano;
  pano.depth = LoadDepth(o.depth);
  pano.image = o.image.empty() ? Image(pano.depth.width(), pano.depth.height(), 1)
                               : LoadImagePng(o.image);

  PatchSpec spec;
  spec.width = o.width;
  spec.height = o.height;
  spec.fx = o.fx;
  spec.fy = o.fy;
  spec.cx = o.cx.value_or((o.width - 1) / 2.0);
  spec.cy = o.cy.value_or((o.height - 1) / 2.0);
  spec.radial_depth = !o.planar;

  const std::vector<Patch> patches = GenerateScenePatches(pano, o.step, spec);
  fs::create_directories(o.out);

  nlohmann::ordered_json manifest;
  manifest["scene"] = o.scene;
  manifest["intrinsics"] = {{"fx", spec.fx}, {"fy", spec.fy}, {"cx", spec.cx}, {"cy", spec.cy},
                            {"width", spec.width}, {"height", spec.height}};
  manifest["depth"] = spec.radial_depth ? "z-depth from radial range" : "z-depth as stored";
  manifest["patches"] = nlohmann::ordered_json::array();
  for (const Patch& patch : patches) {
    char stem[64];
    std::snprintf(stem, sizeof(stem), "%s_az%03d", o.scene.c_str(),
                  static_cast<int>(patch.azimuth));
    const std::string depth_name = std::string(stem) + ".fmap";
    const std::string image_name = std::string(stem) + ".png";
    SaveDepth(patch.depth, fs::path(o.out) / depth_name);
    SaveImagePng(patch.image, fs::path(o.out) / image_name);
    manifest["patches"].push_back(
        {{"azimuth", patch.azimuth}, {"image", image_name}, {"depth", depth_name}});
  }
  const fs::path manifest_path = fs::path(o.out) / (o.scene + ".json");
  std::ofstream(manifest_path) << manifest.dump(2) << '\n';
  std::cout << "wrote " << patches.size() << " patches and " << manifest_path.string() << '\n';
  return 0;
}

struct LossOptions {
  std::string target;
  std::string support;
  std::string depth;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  std::vector<double> rotation = {0.0, 0.0, 0.0};
  std::vector<double> translation = {0.0, 0.0, 0.0};
  std::string proxy;
};

int RunLosses(const LossOptions& o) {
  const Image target = LoadImagePng(o.target);
  const Image support = LoadImagePng(o.support);
  const DepthMap depth = LoadDepth(o.depth);
  Check(target.width() == depth.width() && target.height() == depth.height(),
        "target image and depth differ in size");
  Intrinsics K{o.fx, o.fy, o.cx, o.cy, depth.width(), depth.height()};
  K.Validate();
  const RigidTransform T =
      AxisAngleToTransform(Vec3(o.rotation[0], o.rotation[1], o.rotation[2]),
                           Vec3(o.translation[0], o.translation[1], o.translation[2]));

  const WarpedImage synth = SynthesizeView(depth, support, K, T);
  const LossMap reconstruction = PhotometricLoss(target, synth.image, {}, &synth.valid);
  const LossMap identity = PhotometricLoss(target, support);
  const std::vector<LossMap> synth_losses = {reconstruction};
  const std::vector<LossMap> identity_losses = {identity};
  const Mask keep = StaticAutomask(synth_losses, identity_losses);

  DisparityMap disparity(depth.width(), depth.height());
  for (std::size_t i = 0; i < disparity.values.size(); ++i) {
    disparity.values[i] = depth.valid[i] ? 1.0 / depth.depth[i] : 0.0;
  }

  std::printf("valid_warp_fraction %.6g\n",
              static_cast<double>(CountTrue(synth.valid)) / synth.valid.size());
  std::printf("photometric %.6g\n", reconstruction.Mean());
  std::printf("photometric_automasked %.6g\n", reconstruction.Mean(&keep));
  std::printf("automask_keep_fraction %.6g\n",
              static_cast<double>(CountTrue(keep)) / keep.size());
  std::printf("smoothness %.6g\n", SmoothnessLoss(disparity, target));
  if (!o.proxy.empty()) {
    const DepthMap proxy = LoadDepth(o.proxy);
    const BerhuResult berhu = BerhuLoss(depth, proxy);
    std::printf("berhu %.6g\nberhu_threshold %.6g\n", berhu.loss, berhu.threshold);
    std::printf("log_l1 %.6g\n", LogL1Loss(depth, proxy));
  }
  return 0;
}

struct RankOptions {
  std::string report;
  std::string metric = "AbsRel";
  std::string direction;
};

int RunRank(const RankOptions& o) {
  std::ifstream in(o.report);
  Check(static_cast<bool>(in), "cannot read " + o.report);
  const MetricReport report = ReportFromJson(nlohmann::ordered_json::parse(in));
  const Direction direction =
      o.direction.empty() ? MetricDirection(o.metric) : ParseDirection(o.direction);
  const RankResult ranks = RankMethods(report, o.metric, direction);
  const auto it = std::find(report.metric_names.begin(), report.metric_names.end(), o.metric);
  const auto k = static_cast<std::size_t>(it - report.metric_names.begin());
  std::printf("%s (%s is better)%s\n", o.metric.c_str(), ToString(direction).c_str(),
              ranks.tie ? " [tie]" : "");
  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    std::printf("%d\t%s\t%.6g\n", ranks.ranks[i], report.methods[i].method.c_str(),
                report.methods[i].aggregate[k].second);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth benchmark evaluation and loss diagnostics"};
  app.require_subcommand(1);

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate methods listed in a manifest");
  eval_cmd->set_config("--config", "", "Key-value file mirroring the flags");
  eval_cmd->add_option("--manifest", eval.manifest, "Manifest JSON")->required();
  eval_cmd->add_option("--align", eval.align, "median | fixed:<s> | none")
      ->capture_default_str();
  eval_cmd->add_option("--min-depth", eval.min_depth)->capture_default_str();
  eval_cmd->add_option("--max-depth", eval.max_depth)->capture_default_str();
  eval_cmd->add_option("--suites", eval.suites, "Subset of image,pointcloud,edge")
      ->capture_default_str();
  eval_cmd->add_option("--edge-transform", eval.edge_transform, "raw | log | inverse")
      ->capture_default_str();
  eval_cmd->add_option("--edge-sigma", eval.edge_sigma)->capture_default_str();
  eval_cmd->add_option("--edge-trunc", eval.edge_trunc, "Edge distance truncation (px)")
      ->capture_default_str();
  eval_cmd->add_option("--tau3d", eval.tau3d, "Point threshold (m)")->capture_default_str();
  eval_cmd->add_flag("--legacy-sqrel", eval.legacy_sqrel, "Also report the legacy SqRel");
  eval_cmd->add_option("--out", eval.out, "Output directory")->capture_default_str();
  eval_cmd->add_option("--format", eval.format, "Subset of json,csv,markdown")
      ->capture_default_str();
  eval_cmd->add_option("--jobs", eval.jobs, "Worker threads")
      ->envname("DEPTHBENCH_JOBS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_flag("--allow-partial", eval.allow_partial,
                     "Report failed images instead of aborting");

  BoundaryOptions bnd;
  CLI::App* bnd_cmd = app.add_subcommand("boundaries", "Extract depth boundaries to a PGM");
  bnd_cmd->set_config("--config");
  bnd_cmd->add_option("--depth", bnd.depth, "Depth PNG or float map")->required();
  bnd_cmd->add_option("--sky", bnd.sky, "Sky mask PNG");
  bnd_cmd->add_option("--transform", bnd.transform, "raw | log | inverse")
      ->capture_default_str();
  bnd_cmd->add_option("--sigma", bnd.sigma)->capture_default_str();
  bnd_cmd->add_option("--low", bnd.low, "Low hysteresis ratio")->capture_default_str();
  bnd_cmd->add_option("--high", bnd.high, "High hysteresis ratio")->capture_default_str();
  bnd_cmd->add_option("--sky-depth", bnd.sky_depth)->capture_default_str();
  bnd_cmd->add_option("--out", bnd.out)->capture_default_str();

  PatchOptions pat;
  CLI::App* pat_cmd =
      app.add_subcommand("patches", "Sample perspective patches from a panorama");
  pat_cmd->set_config("--config");
  pat_cmd->add_option("--depth", pat.depth, "Panorama range map")->required();
  pat_cmd->add_option("--image", pat.image, "Panorama image PNG");
  pat_cmd->add_option("--step", pat.step, "Azimuth step (deg)")->capture_default_str();
  pat_cmd->add_option("--width", pat.width)->capture_default_str();
  pat_cmd->add_option("--height", pat.height)->capture_default_str();
  pat_cmd->add_option("--fx", pat.fx)->capture_default_str();
  pat_cmd->add_option("--fy", pat.fy)->capture_default_str();
  pat_cmd->add_option("--cx", pat.cx, "Default (width-1)/2");
  pat_cmd->add_option("--cy", pat.cy, "Default (height-1)/2");
  pat_cmd->add_flag("--planar", pat.planar, "Panorama stores z-depth, not range");
  pat_cmd->add_option("--scene", pat.scene)->capture_default_str();
  pat_cmd->add_option("--out", pat.out)->capture_default_str();

  LossOptions loss;
  CLI::App* loss_cmd =
      app.add_subcommand("losses", "Forward training losses for an image pair");
  loss_cmd->set_config("--config");
  loss_cmd->add_option("--target", loss.target, "Target image PNG")->required();
  loss_cmd->add_option("--support", loss.support, "Support image PNG")->required();
  loss_cmd->add_option("--depth", loss.depth, "Target depth")->required();
  loss_cmd->add_option("--fx", loss.fx)->required();
  loss_cmd->add_option("--fy", loss.fy)->required();
  loss_cmd->add_option("--cx", loss.cx)->required();
  loss_cmd->add_option("--cy", loss.cy)->required();
  loss_cmd->add_option("--rotation", loss.rotation, "Axis-angle rx ry rz")->expected(3);
  loss_cmd->add_option("--translation", loss.translation, "tx ty tz (m)")->expected(3);
  loss_cmd->add_option("--proxy", loss.proxy, "Proxy depth for berHu and log-L1");

  RankOptions rank;
  CLI::App* rank_cmd = app.add_subcommand("rank", "Rank methods of a JSON report");
  rank_cmd->add_option("--report", rank.report, "report.json")->required();
  rank_cmd->add_option("--metric", rank.metric)->capture_default_str();
  rank_cmd->add_option("--direction", rank.direction, "lower | higher");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval_cmd->parsed()) return RunEval(eval);
    if (bnd_cmd->parsed()) return RunBoundaries(bnd);
    if (pat_cmd->parsed()) return RunPatches(pat);
    if (loss_cmd->parsed()) return RunLosses(loss);
    if (rank_cmd->parsed()) return RunRank(rank);
  } catch (const EvaluationFailed& e) {
    std::cerr << "depthbench: " << e.what() << "\nrerun with --allow-partial to keep going\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "depthbench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
