#pragma once

// Scalar bilinear read shared by ImageF sampling, the scalar kernels and the
// scalar tails of the AVX2 kernels. The AVX2 body mirrors these operations
// one for one; change both together.

#include <algorithm>
#include <cmath>

#include "pmbm/image.hpp"
#include "pmbm/simd/kernels.hpp"

namespace pmbm::simd::detail {

// Coordinates are pulled into [-2, n+1] first. Every neighbor of such a point
// is already outside the image or on its border, so the result is unchanged
// while the integer conversion below stays in range.
inline double guard_coordinate(double v, int n) {
  return std::min(std::max(v, -2.0), static_cast<double>(n) + 1.0);
}

inline double fetch(const double* data, int width, int height, int channels,
                    int ix, int iy, int c, BoundaryPolicy policy) {
  if (policy == BoundaryPolicy::Clamp) {
    ix = std::clamp(ix, 0, width - 1);
    iy = std::clamp(iy, 0, height - 1);
  } else if (ix < 0 || ix >= width || iy < 0 || iy >= height) {
    return 0.0;
  }
  return data[(static_cast<long>(iy) * width + ix) * channels + c];
}

/// Interpolates channel `c` at (x, y). Lerp form: exact for constant
/// neighborhoods and identity at integer coordinates.
inline double bilinear(const double* data, int width, int height,
                       int channels, double x, double y, int c,
                       BoundaryPolicy policy) {
  x = guard_coordinate(x, width);
  y = guard_coordinate(y, height);
  const double x0 = std::floor(x);
  const double y0 = std::floor(y);
  const double fx = x - x0;
  const double fy = y - y0;
  const int ix = static_cast<int>(x0);
  const int iy = static_cast<int>(y0);
  const double v00 = fetch(data, width, height, channels, ix, iy, c, policy);
  const double v10 = fetch(data, width, height, channels, ix + 1, iy, c, policy);
  const double v01 = fetch(data, width, height, channels, ix, iy + 1, c, policy);
  const double v11 =
      fetch(data, width, height, channels, ix + 1, iy + 1, c, policy);
  const double top = v00 + fx * (v10 - v00);
  const double bot = v01 + fx * (v11 - v01);
  return top + fy * (bot - top);
}

/// Projective mapping with the same operation order in every variant.
inline void project(const double* h, double x, double y, double& ox,
                    double& oy) {
  const double w = h[6] * x + h[7] * y + h[8];
  ox = (h[0] * x + h[1] * y + h[2]) / w;
  oy = (h[3] * x + h[4] * y + h[5]) / w;
}

}  // namespace pmbm::simd::detail

namespace pmbm::simd::detail {

/// One output pixel of accumulate_offset_row; also the scalar tail of the
/// vector variant.
inline void offset_pixel(const SourceView& src, int x, int row,
                         const OffsetTap& tap, BoundaryPolicy policy,
                         double* acc) {
  const std::size_t k = static_cast<std::size_t>(row) * src.width + x;
  const double sx =
      (static_cast<double>(x) + tap.px) + (tap.sign * tap.dx[k] - tap.px);
  const double sy =
      (static_cast<double>(row) + tap.py) + (tap.sign * tap.dy[k] - tap.py);
  for (int c = 0; c < src.channels; ++c) {
    const double v = bilinear(src.data, src.width, src.height, src.channels,
                              sx, sy, c, policy);
    acc[static_cast<std::size_t>(x) * src.channels + c] += tap.weight * v;
  }
}

inline void lattice_pixel(const SourceView& src, int x, int row,
                          const LatticeTaps& taps, BoundaryPolicy policy,
                          double* acc) {
  const int nb = (src.width + 3) / 4;
  const double* block =
      taps.offsets + (static_cast<std::size_t>(row) * nb + x / 4) * taps.n * 8 + x % 4;
  for (int s = 0; s < taps.n; ++s) {
    const double sx = (static_cast<double>(x) + taps.px[s]) + block[s * 8];
    const double sy = (static_cast<double>(row) + taps.py[s]) + block[s * 8 + 4];
    for (int c = 0; c < src.channels; ++c) {
      const double v = bilinear(src.data, src.width, src.height, src.channels,
                                sx, sy, c, policy);
      acc[static_cast<std::size_t>(x) * src.channels + c] += taps.weight[s] * v;
    }
  }
}

inline void homography_pixel(const SourceView& src, int x, int row,
                             const double* h, double weight,
                             BoundaryPolicy policy, double* acc) {
  double sx, sy;
  project(h, static_cast<double>(x), static_cast<double>(row), sx, sy);
  for (int c = 0; c < src.channels; ++c) {
    const double v = bilinear(src.data, src.width, src.height, src.channels,
                              sx, sy, c, policy);
    acc[static_cast<std::size_t>(x) * src.channels + c] += weight * v;
  }
}

}  // namespace pmbm::simd::detail
