#pragma once

#include <cstddef>

#include "pmbm/image.hpp"
#include "pmbm/simd/dispatch.hpp"

// Inner loops of the blur operator and of the solvers. Every kernel has a
// scalar reference and, on x86-64, an AVX2 variant. The warp kernels of both
// variants perform the same IEEE operations in the same order, so their
// outputs are bitwise identical; the reductions use four interleaved partial
// sums in both variants for the same reason.
namespace pmbm::simd {

struct SourceView {
  const double* data;
  int width;
  int height;
  int channels;
};

inline SourceView view_of(const ImageF& img) {
  return {img.data(), img.width(), img.height(), img.channels()};
}

/// One timestep of an offset field in "tap" form. (px, py) is the tap's
/// integer position on the filter lattice; the stored offset is split as
/// sign*d = p + (sign*d - p) and the pixel (x, row) reads the source at
/// (x + px) + (sign*dx[k] - px), likewise in y, with k = row*W + x. With p = 0
/// this is exactly x + sign*dx[k]. Offsets cover the whole frame (W*H).
struct OffsetTap {
  const double* dx;
  const double* dy;
  double px;
  double py;
  double sign;
  double weight;
};

/// acc[x*C + c] += tap.weight * bilinear(src, coordinate of (x, row))
void accumulate_offset_row(Isa isa, const SourceView& src, int row,
                           const OffsetTap& tap, BoundaryPolicy policy,
                           double* acc);

/// All taps of a lattice over blocked compensated offsets (see
/// BlurOperator::fused_offsets). Tap s reads the source at
/// (x + px[s]) + dx~, (row + py[s]) + dy~ and adds weight[s] times the sample;
/// per pixel the taps are added in order.
struct LatticeTaps {
  const double* offsets;
  const double* px;
  const double* py;
  const double* weight;
  int n;
};

void accumulate_lattice_row(Isa isa, const SourceView& src, int row,
                            const LatticeTaps& taps, BoundaryPolicy policy,
                            double* acc);

/// acc[x*C + c] += weight * bilinear(src, H(x, row)), H row-major 3x3 with
/// projective normalization.
void accumulate_homography_row(Isa isa, const SourceView& src, int row,
                               const double* h, double weight,
                               BoundaryPolicy policy, double* acc);

double dot(Isa isa, const double* a, const double* b, std::size_t n);

/// y = a*x + b*y
void axpby(Isa isa, double a, const double* x, double b, double* y,
           std::size_t n);

// Convenience overloads on the active instruction set.
inline double dot(const double* a, const double* b, std::size_t n) {
  return dot(active_isa(), a, b, n);
}
inline void axpby(double a, const double* x, double b, double* y,
                  std::size_t n) {
  axpby(active_isa(), a, x, b, y, n);
}

namespace scalar {
void accumulate_offset_row(const SourceView&, int, const OffsetTap&,
                           BoundaryPolicy, double*);
void accumulate_lattice_row(const SourceView&, int, const LatticeTaps&,
                            BoundaryPolicy, double*);
void accumulate_homography_row(const SourceView&, int, const double*, double,
                               BoundaryPolicy, double*);
double dot(const double*, const double*, std::size_t);
void axpby(double, const double*, double, double*, std::size_t);
}  // namespace scalar

namespace avx2 {
void accumulate_offset_row(const SourceView&, int, const OffsetTap&,
                           BoundaryPolicy, double*);
void accumulate_lattice_row(const SourceView&, int, const LatticeTaps&,
                            BoundaryPolicy, double*);
void accumulate_homography_row(const SourceView&, int, const double*, double,
                               BoundaryPolicy, double*);
double dot(const double*, const double*, std::size_t);
void axpby(double, const double*, double, double*, std::size_t);
}  // namespace avx2

}  // namespace pmbm::simd
