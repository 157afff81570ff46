#pragma once

#include "depthbench/types.h"

namespace depthbench {

/// Separable Gaussian blur with replicate borders and kernel radius
/// ceil(3 sigma). sigma = 0 returns the input.
Grid<double> GaussianBlur(const Grid<double>& grid, double sigma);

}  // namespace depthbench
