#pragma once

#include <vector>

#include "pmbm/geometry.hpp"
#include "pmbm/image.hpp"
#include "pmbm/trajectory.hpp"

namespace pmbm {

struct KernelMosaic {
  /// cells_x*patch by cells_y*patch, each cell scaled so its peak is 1.
  ImageF mosaic;
  int cells_x = 0;
  int cells_y = 0;
  int patch = 0;
  /// Cell centers, row-major over the grid.
  std::vector<Point2> centers;
  /// Total response of each center pixel before cropping and scaling.
  std::vector<double> masses;
};

/// Local blur kernel at pixel (x, y): the response of the blur to a unit
/// impulse there (one column of the blur matrix, Zero boundary), cropped to a
/// patch x patch window centered on the pixel. Also returns the uncropped
/// mass. Works at any image size.
ImageF kernel_at(const Trajectory& traj, const CameraIntrinsics& k, int width,
                 int height, int x, int y, int patch, double* mass = nullptr);

/// Kernels at grid centers (m + 1/2)*grid_step, tiled into a mosaic. patch
/// must be odd and >= 3; the grid needs at least one cell.
KernelMosaic kernel_field(const Trajectory& traj, const CameraIntrinsics& k,
                          int width, int height, int grid_step, int patch);

}  // namespace pmbm
