#pragma once

#include <array>

#include <Eigen/SparseCore>

#include "pmbm/geometry.hpp"
#include "pmbm/image.hpp"
#include "pmbm/trajectory.hpp"

namespace pmbm {

/// Explicit N x N blur matrix (N = W*H) assembled stencil by stencil. Slow
/// and memory hungry by design; it exists to check the fast operators.
class SparseBlurMatrix {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SparseBlurMatrix(Matrix m, int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const Matrix& matrix() const noexcept { return m_; }

  /// B u, channel by channel.
  ImageF multiply(const ImageF& u) const;
  /// B^T w, channel by channel.
  ImageF transpose_multiply(const ImageF& w) const;
  /// Column j = y*W + x as a single-channel image (response to a delta).
  ImageF column(int x, int y) const;

 private:
  Matrix m_;
  int width_;
  int height_;
};

inline constexpr int kSparseOracleMaxPixels = 4096;

/// Rows are the bilinear stencils of H_t^-1(i), each weighted 1/T. Throws
/// InvalidArgument when W*H exceeds kSparseOracleMaxPixels.
SparseBlurMatrix build_sparse_oracle(const Trajectory& traj,
                                     const CameraIntrinsics& k, int width,
                                     int height,
                                     BoundaryPolicy boundary = BoundaryPolicy::Zero);

/// The four (index, weight) pairs of a bilinear read at (x, y), after the
/// same coordinate guard and boundary handling as the warp kernels. Indices
/// are -1 for neighbors that read zero.
struct BilinearStencil {
  std::array<long, 4> index;
  std::array<double, 4> weight;
};
BilinearStencil bilinear_stencil(double x, double y, int width, int height,
                                 BoundaryPolicy boundary);

}  // namespace pmbm
