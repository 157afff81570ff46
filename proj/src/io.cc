#include "depthbench/io.h"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

namespace depthbench {

namespace {

struct PngData {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<std::uint16_t> samples;  // row-major, interleaved
};

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

PngData ReadPng(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  Check(file != nullptr, "cannot open " + path.string());

  png_byte signature[8];
  Check(std::fread(signature, 1, 8, file.get()) == 8 && png_sig_cmp(signature, 0, 8) == 0,
        path.string() + " is not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  Check(png != nullptr, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng initialisation failed");
  }

  PngData data;
  std::vector<png_bytep> rows;
  std::vector<png_byte> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("failed to decode " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  data.bit_depth = png_get_bit_depth(png, info);
  data.color_type = png_get_color_type(png, info);
  if (data.color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (data.color_type == PNG_COLOR_TYPE_GRAY && data.bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_read_update_info(png, info);

  data.width = static_cast<int>(png_get_image_width(png, info));
  data.height = static_cast<int>(png_get_image_height(png, info));
  data.channels = png_get_channels(png, info);
  const int depth_after = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  buffer.resize(row_bytes * data.height);
  rows.resize(data.height);
  for (int y = 0; y < data.height; ++y) rows[y] = buffer.data() + y * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t count = static_cast<std::size_t>(data.width) * data.height * data.channels;
  data.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (depth_after == 16) {
      // PNG stores 16-bit samples big-endian.
      data.samples[i] = static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
    } else {
      data.samples[i] = buffer[i];
    }
  }
  data.bit_depth = depth_after;
  return data;
}

void WritePng(const std::filesystem::path& path, int width, int height, int channels,
              int bit_depth, const std::vector<std::uint16_t>& samples) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  Check(file != nullptr, "cannot write " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  Check(png != nullptr, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng initialisation failed");
  }

  const int bytes = bit_depth / 8;
  std::vector<png_byte> buffer(static_cast<std::size_t>(width) * height * channels * bytes);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (bytes == 2) {
      buffer[2 * i] = static_cast<png_byte>(samples[i] >> 8);
      buffer[2 * i + 1] = static_cast<png_byte>(samples[i] & 0xff);
    } else {
      buffer[i] = static_cast<png_byte>(samples[i]);
    }
  }
  std::vector<png_bytep> rows(height);
  const std::size_t row_bytes = static_cast<std::size_t>(width) * channels * bytes;
  for (int y = 0; y < height; ++y) rows[y] = buffer.data() + y * row_bytes;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("failed to encode " + path.string());
  }
  png_init_io(png, file.get());
  const int color = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, width, height, bit_depth, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Check(static_cast<bool>(in), "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool HasPngExtension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".png";
}

}  // namespace

DepthMap LoadDepthPng16(const std::filesystem::path& path) {
  const PngData png = ReadPng(path);
  Check(png.bit_depth == 16 && png.channels == 1,
        path.string() + " must be a 16-bit single-channel PNG");
  DepthMap depth(png.width, png.height);
  for (std::size_t i = 0; i < png.samples.size(); ++i) {
    const std::uint16_t raw = png.samples[i];
    if (raw == 0) continue;
    depth.depth[i] = raw / 256.0;
    depth.valid[i] = 1;
  }
  return depth;
}

void SaveDepthPng16(const DepthMap& depth, const std::filesystem::path& path) {
  depth.Validate();
  std::vector<std::uint16_t> samples(depth.depth.size(), 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!depth.valid[i]) continue;
    const double raw = std::round(depth.depth[i] * 256.0);
    Check(raw >= 1.0 && raw <= 65535.0, "depth value does not fit the 16-bit encoding");
    samples[i] = static_cast<std::uint16_t>(raw);
  }
  WritePng(path, depth.width(), depth.height(), 1, 16, samples);
}

Grid<double> LoadFloatMap(const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little,
                "float maps are decoded on little-endian hosts only");
  const std::string bytes = ReadAll(path);
  const std::string magic = "FMAP1\n";
  Check(bytes.compare(0, magic.size(), magic) == 0, path.string() + ": bad float-map magic");

  const std::size_t eol = bytes.find('\n', magic.size());
  Check(eol != std::string::npos, path.string() + ": missing float-map dimensions");
  std::istringstream header(bytes.substr(magic.size(), eol - magic.size()));
  long long w = -1;
  long long h = -1;
  std::string trailing;
  header >> w >> h;
  Check(!header.fail() && !(header >> trailing) && w >= 0 && h >= 0 &&
            w <= std::numeric_limits<int>::max() && h <= std::numeric_limits<int>::max(),
        path.string() + ": malformed float-map dimensions");

  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  const std::size_t payload = bytes.size() - (eol + 1);
  Check(payload == count * sizeof(float),
        path.string() + ": float-map payload does not match its dimensions");

  Grid<double> grid(static_cast<int>(w), static_cast<int>(h));
  const char* data = bytes.data() + eol + 1;
  for (std::size_t i = 0; i < count; ++i) {
    float v;
    std::memcpy(&v, data + i * sizeof(float), sizeof(float));
    grid[i] = v;
  }
  return grid;
}

void SaveFloatMap(const Grid<double>& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  Check(static_cast<bool>(out), "cannot write " + path.string());
  out << "FMAP1\n" << grid.width() << ' ' << grid.height() << '\n';
  for (double v : grid.values()) {
    const float f = static_cast<float>(v);
    out.write(reinterpret_cast<const char*>(&f), sizeof(float));
  }
  Check(static_cast<bool>(out), "failed writing " + path.string());
}

DepthMap LoadDepthFloatMap(const std::filesystem::path& path) {
  return DepthMap::FromValues(LoadFloatMap(path));
}

void SaveDepthFloatMap(const DepthMap& depth, const std::filesystem::path& path) {
  Grid<double> values = depth.depth;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!depth.valid[i]) values[i] = std::numeric_limits<double>::quiet_NaN();
  }
  SaveFloatMap(values, path);
}

DepthMap LoadDepth(const std::filesystem::path& path) {
  return HasPngExtension(path) ? LoadDepthPng16(path) : LoadDepthFloatMap(path);
}

void SaveDepth(const DepthMap& depth, const std::filesystem::path& path) {
  if (HasPngExtension(path)) {
    SaveDepthPng16(depth, path);
  } else {
    SaveDepthFloatMap(depth, path);
  }
}

Mask LoadMaskPng(const std::filesystem::path& path) {
  const PngData png = ReadPng(path);
  Check(png.bit_depth == 8 && png.channels == 1,
        path.string() + " must be an 8-bit single-channel PNG");
  Mask mask(png.width, png.height);
  for (std::size_t i = 0; i < png.samples.size(); ++i) mask[i] = png.samples[i] != 0;
  return mask;
}

void SaveMaskPng(const Mask& mask, const std::filesystem::path& path) {
  std::vector<std::uint16_t> samples(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) samples[i] = mask[i] ? 255 : 0;
  WritePng(path, mask.width(), mask.height(), 1, 8, samples);
}

Image LoadImagePng(const std::filesystem::path& path) {
  const PngData png = ReadPng(path);
  const bool has_alpha = png.channels == 2 || png.channels == 4;
  const int channels = has_alpha ? png.channels - 1 : png.channels;
  const double scale = png.bit_depth == 16 ? 65535.0 : 255.0;
  Image image(png.width, png.height, channels);
  for (int y = 0; y < png.height; ++y) {
    for (int x = 0; x < png.width; ++x) {
      const std::size_t base =
          (static_cast<std::size_t>(y) * png.width + x) * png.channels;
      for (int c = 0; c < channels; ++c) image.at(x, y, c) = png.samples[base + c] / scale;
    }
  }
  return image;
}

void SaveImagePng(const Image& image, const std::filesystem::path& path) {
  Check(image.channels() == 1 || image.channels() == 3,
        "only 1- or 3-channel images can be written");
  std::vector<std::uint16_t> samples(image.values().size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = std::clamp(image.values()[i], 0.0, 1.0);
    samples[i] = static_cast<std::uint16_t>(std::lround(v * 255.0));
  }
  WritePng(path, image.width(), image.height(), image.channels(), 8, samples);
}

}  // namespace depthbench
