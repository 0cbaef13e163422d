#pragma once

#include <memory>
#include <vector>

#include "pmbm/geometry.hpp"
#include "pmbm/image.hpp"
#include "pmbm/offset_field.hpp"
#include "pmbm/trajectory.hpp"

namespace pmbm {

enum class AdjointMode {
  /// Samples at H_t(j), recomputed from the homographies on every call.
  ExactInverse,
  /// Reuses the forward field with H_t(j) ~ j - Delta_t(j); no extra storage.
  NegatedForward,
};

/// One filter tap of the fused blur: lattice position, source timestep and
/// weight.
struct Tap {
  int px;
  int py;
  int timestep;
  double weight;
};

/// sqrt(T') x sqrt(T') lattice of taps, T' the smallest square >= T.
/// Timestep t sits at the t-th lattice position in row-major order, with
/// positions spanning {-(s/2), ..., s-1-(s/2)} per axis. When T is not a
/// square, the final pose is repeated on the remaining positions and its
/// weight 1/T is shared equally among its copies.
class TapLattice {
 public:
  static TapLattice for_timesteps(int timesteps);

  int side() const noexcept { return side_; }
  int timesteps() const noexcept { return timesteps_; }
  const std::vector<Tap>& taps() const noexcept { return taps_; }

 private:
  int side_ = 0;
  int timesteps_ = 0;
  std::vector<Tap> taps_;
};

/// The projective blur B u = (1/T) sum_t u(H_t^-1(i)) and its adjoint,
/// represented by the forward offset field. Immutable after construction.
class BlurOperator {
 public:
  BlurOperator(Trajectory traj, CameraIntrinsics k, int width, int height,
               AdjointMode mode = AdjointMode::ExactInverse,
               BoundaryPolicy boundary = BoundaryPolicy::Clamp);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int timesteps() const noexcept { return traj_.size(); }
  const Trajectory& trajectory() const noexcept { return traj_; }
  const CameraIntrinsics& intrinsics() const noexcept { return k_; }
  AdjointMode adjoint_mode() const noexcept { return mode_; }
  BoundaryPolicy boundary() const noexcept { return boundary_; }
  const OffsetField& forward_field() const noexcept { return forward_; }
  const TapLattice& lattice() const noexcept { return lattice_; }
  /// H_t for every timestep; the forward blur samples through their inverses.
  const std::vector<Homography>& homographies() const noexcept { return maps_; }
  const std::vector<Homography>& inverse_homographies() const noexcept {
    return inverse_maps_;
  }

  BlurOperator with_adjoint_mode(AdjointMode mode) const;
  BlurOperator with_boundary(BoundaryPolicy boundary) const;
  /// Fault-injection hook for self-tests: a copy whose stored forward offsets
  /// are scaled by (1 + fraction). Homography-based paths are unaffected.
  BlurOperator with_corrupted_offsets(double fraction) const;

  /// Efficient forward blur.
  ImageF apply(const ImageF& u) const;
  ImageF apply_adjoint(const ImageF& w) const;

  /// Compensated offsets of every lattice tap, pixel-major in blocks of four
  /// columns: ((y*nb + x/4)*taps + s)*8 + x%4 holds dx~, +4 holds dy~, with
  /// nb = ceil(W/4). Built on first use and shared between copies.
  const std::vector<double>& fused_offsets() const;

 private:
  struct FusedCache;
  Trajectory traj_;
  CameraIntrinsics k_;
  int width_;
  int height_;
  AdjointMode mode_;
  BoundaryPolicy boundary_;
  std::vector<Homography> maps_;
  std::vector<Homography> inverse_maps_;
  OffsetField forward_;
  TapLattice lattice_;
  std::shared_ptr<FusedCache> fused_;
};

/// T separate warps through the offsets, averaged afterwards.
ImageF blur_naive(const ImageF& u, const BlurOperator& op);
/// All taps of the lattice fused in a single pass over the output.
ImageF blur_efficient(const ImageF& u, const BlurOperator& op);
/// Per-homography warps evaluated projectively, without offsets.
ImageF blur_homography(const ImageF& u, const BlurOperator& op);
/// B^T w in the operator's adjoint mode.
ImageF adjoint(const ImageF& w, const BlurOperator& op);

/// Lattice-compensated offsets Delta~ = Delta - p, one frame per tap.
OffsetField compensated_offsets(const BlurOperator& op);

/// |<w, B u> - <B^T w, u>| / |<w, B u>|.
double adjoint_discrepancy(const BlurOperator& op, const ImageF& u, const ImageF& w);

/// Smooth sensor response R(x) = x - log(1 + exp(a(x-1)))/a.
double saturate(double x, double a);
ImageF saturate(const ImageF& x, double a);

}  // namespace pmbm
