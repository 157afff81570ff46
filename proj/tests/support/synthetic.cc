#include "synthetic.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "depthbench/io.h"

namespace depthbench::testing {

Intrinsics CenteredIntrinsics(int width, int height) {
  return {static_cast<double>(width), static_cast<double>(width), (width - 1) / 2.0,
          (height - 1) / 2.0, width, height};
}

DepthMap FrontoParallelPlane(int width, int height, double z) {
  DepthMap d(width, height);
  for (std::size_t i = 0; i < d.depth.size(); ++i) {
    d.depth[i] = z;
    d.valid[i] = 1;
  }
  return d;
}

DepthMap HalfPlanes(int width, int height, int seam, double left, double right) {
  DepthMap d(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) d.Set(x, y, x < seam ? left : right);
  }
  return d;
}

DepthMap SlantedPlane(const Intrinsics& K, const Vec3& normal, double offset) {
  DepthMap d(K.width, K.height);
  for (int y = 0; y < K.height; ++y) {
    for (int x = 0; x < K.width; ++x) {
      const Vec3 ray((x - K.cx) / K.fx, (y - K.cy) / K.fy, 1.0);
      const double denom = normal.dot(ray);
      if (denom == 0.0) continue;
      const double z = offset / denom;
      if (z > 0.0) d.Set(x, y, z);
    }
  }
  return d;
}

DepthMap RandomDepth(std::mt19937_64& rng, int width, int height, double lo, double hi,
                     double dropout) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DepthMap d(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = value(rng);
      if (unit(rng) >= dropout) d.Set(x, y, v);
    }
  }
  return d;
}

Image RandomImage(std::mt19937_64& rng, int width, int height, int channels) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Image image(width, height, channels);
  for (double& v : image.values()) v = unit(rng);
  return image;
}

Mask RandomMask(std::mt19937_64& rng, int width, int height, double density) {
  std::bernoulli_distribution on(density);
  Mask mask(width, height);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = on(rng);
  return mask;
}

PointCloud RandomCloud(std::mt19937_64& rng, std::size_t n, double extent) {
  std::uniform_real_distribution<double> coord(-extent, extent);
  PointCloud cloud(n);
  for (Vec3& p : cloud) p = Vec3(coord(rng), coord(rng), coord(rng));
  return cloud;
}

RigidTransform RandomRigid(std::mt19937_64& rng, double max_translation) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, M_PI);
  std::uniform_real_distribution<double> shift(-max_translation, max_translation);
  const Vec3 axis = Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
  return AxisAngleToTransform(axis * angle(rng), Vec3(shift(rng), shift(rng), shift(rng)));
}

Panorama ConstantRangePanorama(int height, double range) {
  const int width = 2 * height;
  Panorama pano{Image(width, height, 1), DepthMap(width, height)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      pano.image.at(x, y, 0) = static_cast<double>(x) / width;
      pano.depth.Set(x, y, range);
    }
  }
  return pano;
}

std::filesystem::path WriteSyntheticDataset(const std::filesystem::path& dir, int images,
                                            const std::vector<SyntheticMethod>& methods,
                                            std::uint64_t seed) {
  constexpr int kWidth = 32, kHeight = 24;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> seam(8, 24);
  std::uniform_real_distribution<double> near(1.5, 4.0), far(6.0, 20.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Intrinsics K = CenteredIntrinsics(kWidth, kHeight);

  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (int i = 0; i < images; ++i) {
    const std::string name = "img" + std::to_string(i);
    DepthMap gt = HalfPlanes(kWidth, kHeight, seam(rng), near(rng), far(rng));
    // Invalid corner block, kept clear of the seam so its edges survive.
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 3; ++x) gt.valid(x, y) = 0;
    }
    SaveDepth(gt, dir / (name + "_gt.png"));
    gt = LoadDepth(dir / (name + "_gt.png"));

    nlohmann::ordered_json predictions = nlohmann::ordered_json::object();
    for (const SyntheticMethod& m : methods) {
      DepthMap pred(kWidth, kHeight);
      for (int y = 0; y < kHeight; ++y) {
        for (int x = 0; x < kWidth; ++x) {
          const double base = gt.valid(x, y) ? gt.depth(x, y) : 5.0;
          pred.Set(x, y, std::max(0.05, m.scale * base * (1.0 + m.noise * gauss(rng))));
        }
      }
      const std::string file = name + "_" + m.name + ".fmap";
      SaveDepth(pred, dir / file);
      predictions[m.name] = file;
    }
    records.push_back({{"name", name},
                       {"gt", name + "_gt.png"},
                       {"intrinsics", {{"fx", K.fx}, {"fy", K.fy}, {"cx", K.cx}, {"cy", K.cy}}},
                       {"predictions", predictions}});
  }
  const auto path = dir / "manifest.json";
  std::ofstream(path) << nlohmann::ordered_json{{"records", records}}.dump(2);
  return path;
}

std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("depthbench_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace depthbench::testing
