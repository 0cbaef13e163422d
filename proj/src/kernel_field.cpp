#include "pmbm/kernel_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmbm/error.hpp"
#include "pmbm/sparse_oracle.hpp"

namespace pmbm {
namespace {

void check_patch(int patch) {
  if (patch < 3 || patch % 2 == 0) {
    throw InvalidArgument("kernel patch must be odd and >= 3, got " +
                          std::to_string(patch));
  }
}

}  // namespace

ImageF kernel_at(const Trajectory& traj, const CameraIntrinsics& k, int width,
                 int height, int x, int y, int patch, double* mass) {
  check_patch(patch);
  if (x < 0 || x >= width || y < 0 || y >= height) {
    throw InvalidArgument("kernel center outside the image");
  }
  const int half = patch / 2;
  const long target = static_cast<long>(y) * width + x;
  const double weight = 1.0 / traj.size();
  ImageF out(patch, patch, 1);
  double total = 0.0;
  for (const auto& pose : traj) {
    const Homography h = homography_from_pose(pose, k);
    const Homography inv = h.inverse();
    // Output pixels whose stencil can touch (x, y) lie next to H(x, y).
    const Point2 c = h.apply(x, y);
    const int r = 3;
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x)) - r);
    const int x1 = std::min(width - 1, static_cast<int>(std::floor(c.x)) + r + 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y)) - r);
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(c.y)) + r + 1);
    for (int iy = y0; iy <= y1; ++iy) {
      for (int ix = x0; ix <= x1; ++ix) {
        const Point2 s = inv.apply(ix, iy);
        const BilinearStencil st =
            bilinear_stencil(s.x, s.y, width, height, BoundaryPolicy::Zero);
        for (int q = 0; q < 4; ++q) {
          if (st.index[q] != target) continue;
          const double v = weight * st.weight[q];
          total += v;
          const int px = ix - x + half;
          const int py = iy - y + half;
          if (px >= 0 && px < patch && py >= 0 && py < patch) out.at(px, py) += v;
        }
      }
    }
  }
  if (mass) *mass = total;
  return out;
}

KernelMosaic kernel_field(const Trajectory& traj, const CameraIntrinsics& k,
                          int width, int height, int grid_step, int patch) {
  check_patch(patch);
  if (grid_step < 1) throw InvalidArgument("kernel grid step must be >= 1");
  KernelMosaic km;
  km.patch = patch;
  km.cells_x = width / grid_step;
  km.cells_y = height / grid_step;
  if (km.cells_x < 1 || km.cells_y < 1) {
    throw InvalidArgument("kernel grid step " + std::to_string(grid_step) +
                          " leaves no cell in a " + std::to_string(width) + "x" +
                          std::to_string(height) + " image");
  }
  km.mosaic = ImageF(km.cells_x * patch, km.cells_y * patch, 1);
  for (int gy = 0; gy < km.cells_y; ++gy) {
    for (int gx = 0; gx < km.cells_x; ++gx) {
      const int cx = gx * grid_step + grid_step / 2;
      const int cy = gy * grid_step + grid_step / 2;
      double mass = 0.0;
      const ImageF cell = kernel_at(traj, k, width, height, cx, cy, patch, &mass);
      const double peak = cell.max_value();
      for (int py = 0; py < patch; ++py) {
        for (int px = 0; px < patch; ++px) {
          km.mosaic.at(gx * patch + px, gy * patch + py) =
              peak > 0.0 ? cell.at(px, py) / peak : 0.0;
        }
      }
      km.centers.push_back({static_cast<double>(cx), static_cast<double>(cy)});
      km.masses.push_back(mass);
    }
  }
  return km;
}

}  // namespace pmbm
