#include "pmbm/sparse_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pmbm/error.hpp"

namespace pmbm {

BilinearStencil bilinear_stencil(double x, double y, int width, int height,
                                 BoundaryPolicy boundary) {
  x = std::clamp(x, -2.0, width + 1.0);
  y = std::clamp(y, -2.0, height + 1.0);
  const double x0 = std::floor(x);
  const double y0 = std::floor(y);
  const double fx = x - x0;
  const double fy = y - y0;
  const int ix = static_cast<int>(x0);
  const int iy = static_cast<int>(y0);
  BilinearStencil s{};
  const int dxs[4] = {0, 1, 0, 1};
  const int dys[4] = {0, 0, 1, 1};
  const double ws[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  for (int n = 0; n < 4; ++n) {
    int cx = ix + dxs[n];
    int cy = iy + dys[n];
    if (boundary == BoundaryPolicy::Clamp) {
      cx = std::clamp(cx, 0, width - 1);
      cy = std::clamp(cy, 0, height - 1);
    } else if (cx < 0 || cx >= width || cy < 0 || cy >= height) {
      s.index[n] = -1;
      s.weight[n] = 0.0;
      continue;
    }
    s.index[n] = static_cast<long>(cy) * width + cx;
    s.weight[n] = ws[n];
  }
  return s;
}

SparseBlurMatrix::SparseBlurMatrix(Matrix m, int width, int height)
    : m_(std::move(m)), width_(width), height_(height) {}

ImageF SparseBlurMatrix::multiply(const ImageF& u) const {
  if (u.width() != width_ || u.height() != height_) {
    throw InvalidArgument("sparse oracle: image shape mismatch");
  }
  ImageF out(width_, height_, u.channels());
  const long n = static_cast<long>(width_) * height_;
  const int c = u.channels();
  for (int ch = 0; ch < c; ++ch) {
    Eigen::VectorXd x(n);
    for (long i = 0; i < n; ++i) x[i] = u.data()[i * c + ch];
    const Eigen::VectorXd y = m_ * x;
    for (long i = 0; i < n; ++i) out.data()[i * c + ch] = y[i];
  }
  return out;
}

ImageF SparseBlurMatrix::transpose_multiply(const ImageF& w) const {
  if (w.width() != width_ || w.height() != height_) {
    throw InvalidArgument("sparse oracle: image shape mismatch");
  }
  ImageF out(width_, height_, w.channels());
  const long n = static_cast<long>(width_) * height_;
  const int c = w.channels();
  for (int ch = 0; ch < c; ++ch) {
    Eigen::VectorXd x(n);
    for (long i = 0; i < n; ++i) x[i] = w.data()[i * c + ch];
    const Eigen::VectorXd y = m_.transpose() * x;
    for (long i = 0; i < n; ++i) out.data()[i * c + ch] = y[i];
  }
  return out;
}

ImageF SparseBlurMatrix::column(int x, int y) const {
  if (x < 0 || x >= width_ || y < 0 || y >= height_) {
    throw InvalidArgument("sparse oracle: column outside the image");
  }
  const long j = static_cast<long>(y) * width_ + x;
  ImageF out(width_, height_, 1);
  for (long r = 0; r < m_.outerSize(); ++r) {
    for (Matrix::InnerIterator it(m_, r); it; ++it) {
      if (it.col() == j) out.data()[r] += it.value();
    }
  }
  return out;
}

SparseBlurMatrix build_sparse_oracle(const Trajectory& traj,
                                     const CameraIntrinsics& k, int width,
                                     int height, BoundaryPolicy boundary) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("sparse oracle: dimensions must be positive");
  }
  const long n = static_cast<long>(width) * height;
  if (n > kSparseOracleMaxPixels) {
    throw InvalidArgument("sparse oracle is limited to " +
                          std::to_string(kSparseOracleMaxPixels) +
                          " pixels, got " + std::to_string(n));
  }
  const double weight = 1.0 / traj.size();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * traj.size() * 4);
  for (const auto& pose : traj) {
    const Homography inv = homography_from_pose(pose, k).inverse();
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const Point2 s = inv.apply(x, y);
        const BilinearStencil st = bilinear_stencil(s.x, s.y, width, height, boundary);
        const long row = static_cast<long>(y) * width + x;
        for (int q = 0; q < 4; ++q) {
          if (st.index[q] >= 0 && st.weight[q] != 0.0) {
            triplets.emplace_back(row, st.index[q], weight * st.weight[q]);
          }
        }
      }
    }
  }
  SparseBlurMatrix::Matrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseBlurMatrix(std::move(m), width, height);
}

}  // namespace pmbm
