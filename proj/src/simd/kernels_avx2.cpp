// Mirrors kernels_scalar.cpp operation by operation; see bilinear.hpp.
//
// The AVX2 target is enabled by pragma after all includes rather than by a
// per-file -mavx2, so inline functions and template instantiations pulled in
// from headers are still emitted for the baseline ISA. FMA stays disabled to
// keep rounding identical to the scalar reference.

#include <immintrin.h>

#include "bilinear.hpp"
#include "pmbm/simd/kernels.hpp"

#if defined(__clang__)
#pragma clang attribute push(__attribute__((target("avx2"))), apply_to = function)
#elif defined(__GNUC__)
#pragma GCC push_options
#pragma GCC target("avx2")
#endif

namespace pmbm::simd::avx2 {
namespace {

struct Lanes {
  __m256d fx, fy;
  __m128i ix, iy;
};

inline Lanes split_coordinates(__m256d sx, __m256d sy, int width, int height) {
  const __m256d lo = _mm256_set1_pd(-2.0);
  sx = _mm256_min_pd(_mm256_max_pd(sx, lo),
                     _mm256_set1_pd(static_cast<double>(width) + 1.0));
  sy = _mm256_min_pd(_mm256_max_pd(sy, lo),
                     _mm256_set1_pd(static_cast<double>(height) + 1.0));
  const __m256d x0 = _mm256_floor_pd(sx);
  const __m256d y0 = _mm256_floor_pd(sy);
  return {_mm256_sub_pd(sx, x0), _mm256_sub_pd(sy, y0),
          _mm256_cvttpd_epi32(x0), _mm256_cvttpd_epi32(y0)};
}

// Gathers channel c of the four neighbors for four lanes.
struct Corners {
  __m128i idx00, idx10, idx01, idx11;
  __m256d ok00, ok10, ok01, ok11;  // all-ones where the read is valid
};

inline __m256d widen_mask(__m128i m) {
  return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(m));
}

inline __m128i inside(__m128i v, int n) {
  const __m128i ge0 = _mm_cmpgt_epi32(v, _mm_set1_epi32(-1));
  const __m128i ltn = _mm_cmplt_epi32(v, _mm_set1_epi32(n));
  return _mm_and_si128(ge0, ltn);
}

inline Corners corners(const Lanes& l, const SourceView& src,
                       BoundaryPolicy policy) {
  const __m128i one = _mm_set1_epi32(1);
  const __m128i zero = _mm_setzero_si128();
  const __m128i wmax = _mm_set1_epi32(src.width - 1);
  const __m128i hmax = _mm_set1_epi32(src.height - 1);
  const __m128i x0 = l.ix;
  const __m128i x1 = _mm_add_epi32(l.ix, one);
  const __m128i y0 = l.iy;
  const __m128i y1 = _mm_add_epi32(l.iy, one);
  const __m128i cx0 = _mm_min_epi32(_mm_max_epi32(x0, zero), wmax);
  const __m128i cx1 = _mm_min_epi32(_mm_max_epi32(x1, zero), wmax);
  const __m128i cy0 = _mm_min_epi32(_mm_max_epi32(y0, zero), hmax);
  const __m128i cy1 = _mm_min_epi32(_mm_max_epi32(y1, zero), hmax);
  const __m128i w = _mm_set1_epi32(src.width);
  const __m128i ch = _mm_set1_epi32(src.channels);
  auto index = [&](__m128i cx, __m128i cy) {
    return _mm_mullo_epi32(_mm_add_epi32(_mm_mullo_epi32(cy, w), cx), ch);
  };
  Corners c;
  c.idx00 = index(cx0, cy0);
  c.idx10 = index(cx1, cy0);
  c.idx01 = index(cx0, cy1);
  c.idx11 = index(cx1, cy1);
  if (policy == BoundaryPolicy::Clamp) {
    const __m256d all = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    c.ok00 = c.ok10 = c.ok01 = c.ok11 = all;
  } else {
    const __m128i in_x0 = inside(x0, src.width);
    const __m128i in_x1 = inside(x1, src.width);
    const __m128i in_y0 = inside(y0, src.height);
    const __m128i in_y1 = inside(y1, src.height);
    c.ok00 = widen_mask(_mm_and_si128(in_x0, in_y0));
    c.ok10 = widen_mask(_mm_and_si128(in_x1, in_y0));
    c.ok01 = widen_mask(_mm_and_si128(in_x0, in_y1));
    c.ok11 = widen_mask(_mm_and_si128(in_x1, in_y1));
  }
  return c;
}

inline __m256d gather(const double* base, __m128i idx, __m256d ok) {
  return _mm256_mask_i32gather_pd(_mm256_setzero_pd(), base, idx, ok, 8);
}

inline __m256d interpolate(const SourceView& src, const Lanes& l,
                           const Corners& k, int c) {
  const double* base = src.data + c;
  const __m256d v00 = gather(base, k.idx00, k.ok00);
  const __m256d v10 = gather(base, k.idx10, k.ok10);
  const __m256d v01 = gather(base, k.idx01, k.ok01);
  const __m256d v11 = gather(base, k.idx11, k.ok11);
  const __m256d top =
      _mm256_add_pd(v00, _mm256_mul_pd(l.fx, _mm256_sub_pd(v10, v00)));
  const __m256d bot =
      _mm256_add_pd(v01, _mm256_mul_pd(l.fx, _mm256_sub_pd(v11, v01)));
  return _mm256_add_pd(top, _mm256_mul_pd(l.fy, _mm256_sub_pd(bot, top)));
}

inline void accumulate(const SourceView& src, const Lanes& l,
                       const Corners& k, double weight, int x, double* acc) {
  const __m256d w = _mm256_set1_pd(weight);
  if (src.channels == 1) {
    const __m256d v = interpolate(src, l, k, 0);
    double* out = acc + x;
    _mm256_storeu_pd(out,
                     _mm256_add_pd(_mm256_loadu_pd(out), _mm256_mul_pd(w, v)));
    return;
  }
  alignas(32) double scaled[4];
  for (int c = 0; c < src.channels; ++c) {
    _mm256_store_pd(scaled, _mm256_mul_pd(w, interpolate(src, l, k, c)));
    for (int lane = 0; lane < 4; ++lane) {
      acc[static_cast<std::size_t>(x + lane) * src.channels + c] +=
          scaled[lane];
    }
  }
}

inline __m256d lane_x(int x) {
  return _mm256_set_pd(x + 3.0, x + 2.0, x + 1.0, static_cast<double>(x));
}

inline Lanes offset_lanes(const SourceView& src, int row, const OffsetTap& tap,
                          int x) {
  const std::size_t k = static_cast<std::size_t>(row) * src.width + x;
  const __m256d px = _mm256_set1_pd(tap.px);
  const __m256d py = _mm256_set1_pd(tap.py);
  const __m256d sign = _mm256_set1_pd(tap.sign);
  const __m256d by = _mm256_set1_pd(static_cast<double>(row) + tap.py);
  const __m256d dx = _mm256_loadu_pd(tap.dx + k);
  const __m256d dy = _mm256_loadu_pd(tap.dy + k);
  const __m256d sx = _mm256_add_pd(_mm256_add_pd(lane_x(x), px),
                                   _mm256_sub_pd(_mm256_mul_pd(sign, dx), px));
  const __m256d sy = _mm256_add_pd(by, _mm256_sub_pd(_mm256_mul_pd(sign, dy), py));
  return split_coordinates(sx, sy, src.width, src.height);
}

}  // namespace

void accumulate_offset_row(const SourceView& src, int row, const OffsetTap& tap,
                           BoundaryPolicy policy, double* acc) {
  int x = 0;
  for (; x + 4 <= src.width; x += 4) {
    const Lanes l = offset_lanes(src, row, tap, x);
    accumulate(src, l, corners(l, src, policy), tap.weight, x, acc);
  }
  for (; x < src.width; ++x) detail::offset_pixel(src, x, row, tap, policy, acc);
}

void accumulate_lattice_row(const SourceView& src, int row, const LatticeTaps& taps,
                            BoundaryPolicy policy, double* acc) {
  const int nb = (src.width + 3) / 4;
  const double* block = taps.offsets + static_cast<std::size_t>(row) * nb * taps.n * 8;
  int x = 0;
  for (; x + 4 <= src.width; x += 4, block += taps.n * 8) {
    const __m256d vx = lane_x(x);
    __m256d sum = _mm256_setzero_pd();
    if (src.channels == 1) sum = _mm256_loadu_pd(acc + x);
    for (int s = 0; s < taps.n; ++s) {
      const __m256d sx = _mm256_add_pd(_mm256_add_pd(vx, _mm256_set1_pd(taps.px[s])),
                                       _mm256_loadu_pd(block + s * 8));
      const __m256d sy =
          _mm256_add_pd(_mm256_set1_pd(static_cast<double>(row) + taps.py[s]),
                        _mm256_loadu_pd(block + s * 8 + 4));
      const Lanes l = split_coordinates(sx, sy, src.width, src.height);
      const Corners k = corners(l, src, policy);
      if (src.channels == 1) {
        sum = _mm256_add_pd(
            sum, _mm256_mul_pd(_mm256_set1_pd(taps.weight[s]), interpolate(src, l, k, 0)));
      } else {
        accumulate(src, l, k, taps.weight[s], x, acc);
      }
    }
    if (src.channels == 1) _mm256_storeu_pd(acc + x, sum);
  }
  for (; x < src.width; ++x) detail::lattice_pixel(src, x, row, taps, policy, acc);
}

void accumulate_homography_row(const SourceView& src, int row, const double* h,
                               double weight, BoundaryPolicy policy,
                               double* acc) {
  const __m256d y = _mm256_set1_pd(static_cast<double>(row));
  const __m256d h0 = _mm256_set1_pd(h[0]), h1 = _mm256_set1_pd(h[1]),
                h2 = _mm256_set1_pd(h[2]), h3 = _mm256_set1_pd(h[3]),
                h4 = _mm256_set1_pd(h[4]), h5 = _mm256_set1_pd(h[5]),
                h6 = _mm256_set1_pd(h[6]), h7 = _mm256_set1_pd(h[7]),
                h8 = _mm256_set1_pd(h[8]);
  int x = 0;
  for (; x + 4 <= src.width; x += 4) {
    const __m256d vx = lane_x(x);
    const __m256d w = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(h6, vx), _mm256_mul_pd(h7, y)), h8);
    const __m256d sx = _mm256_div_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(h0, vx), _mm256_mul_pd(h1, y)),
                      h2),
        w);
    const __m256d sy = _mm256_div_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(h3, vx), _mm256_mul_pd(h4, y)),
                      h5),
        w);
    const Lanes l = split_coordinates(sx, sy, src.width, src.height);
    accumulate(src, l, corners(l, src, policy), weight, x, acc);
  }
  for (; x < src.width; ++x) {
    detail::homography_pixel(src, x, row, h, weight, policy, acc);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc,
                        _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                                    _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

}  // namespace pmbm::simd::avx2

#if defined(__clang__)
#pragma clang attribute pop
#elif defined(__GNUC__)
#pragma GCC pop_options
#endif
