#pragma once

#include <filesystem>

#include "depthbench/types.h"

namespace depthbench {

/// 16-bit grayscale PNG, meters = raw / 256, raw 0 = invalid.
DepthMap LoadDepthPng16(const std::filesystem::path& path);
/// Values are rounded to the nearest 1/256 m; invalid pixels and values that
/// do not fit in 16 bits are rejected.
void SaveDepthPng16(const DepthMap& depth, const std::filesystem::path& path);

/// Float map: "FMAP1\n", ASCII "W H\n", then W*H little-endian float32
/// values in row-major order.
Grid<double> LoadFloatMap(const std::filesystem::path& path);
void SaveFloatMap(const Grid<double>& grid, const std::filesystem::path& path);

/// Float map decoded as depth; NaN (or any non-finite / non-positive value)
/// marks an invalid pixel.
DepthMap LoadDepthFloatMap(const std::filesystem::path& path);
/// Invalid pixels are written as NaN.
void SaveDepthFloatMap(const DepthMap& depth, const std::filesystem::path& path);

/// Dispatches on the extension: ".png" is 16-bit PNG, anything else a float map.
DepthMap LoadDepth(const std::filesystem::path& path);
void SaveDepth(const DepthMap& depth, const std::filesystem::path& path);

/// 8-bit PNG mask, nonzero = set.
Mask LoadMaskPng(const std::filesystem::path& path);
void SaveMaskPng(const Mask& mask, const std::filesystem::path& path);

/// 8- or 16-bit gray/RGB(A) PNG scaled to [0, 1]. Alpha is dropped.
Image LoadImagePng(const std::filesystem::path& path);
/// Values are clamped to [0, 1] and written with 8 bits; 1 or 3 channels.
void SaveImagePng(const Image& image, const std::filesystem::path& path);

}  // namespace depthbench
