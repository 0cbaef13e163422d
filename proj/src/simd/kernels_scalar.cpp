#include "bilinear.hpp"
#include "pmbm/simd/kernels.hpp"

namespace pmbm::simd::scalar {

void accumulate_offset_row(const SourceView& src, int row, const OffsetTap& tap,
                           BoundaryPolicy policy, double* acc) {
  for (int x = 0; x < src.width; ++x) {
    detail::offset_pixel(src, x, row, tap, policy, acc);
  }
}

void accumulate_lattice_row(const SourceView& src, int row, const LatticeTaps& taps,
                            BoundaryPolicy policy, double* acc) {
  for (int x = 0; x < src.width; ++x) detail::lattice_pixel(src, x, row, taps, policy, acc);
}

void accumulate_homography_row(const SourceView& src, int row, const double* h,
                               double weight, BoundaryPolicy policy,
                               double* acc) {
  for (int x = 0; x < src.width; ++x) {
    detail::homography_pixel(src, x, row, h, weight, policy, acc);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double total = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

}  // namespace pmbm::simd::scalar
