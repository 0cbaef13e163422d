#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pmbm/geometry.hpp"

namespace pmbm {

/// Temporally ordered camera rotations sampled uniformly over the exposure.
class Trajectory {
 public:
  /// Throws InvalidArgument on an empty pose list.
  explicit Trajectory(std::vector<PoseAngles> poses);

  static Trajectory zeros(int timesteps);

  int size() const noexcept { return static_cast<int>(poses_.size()); }
  const PoseAngles& operator[](int t) const { return poses_[t]; }
  const std::vector<PoseAngles>& poses() const noexcept { return poses_; }
  auto begin() const noexcept { return poses_.begin(); }
  auto end() const noexcept { return poses_.end(); }

  /// Poses reordered so that result[i] = (*this)[order[i]].
  Trajectory permuted(std::span<const int> order) const;

  /// Largest |angle| over all poses and axes.
  double max_abs_angle() const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<PoseAngles> poses_;
};

/// Copy with the mean pose subtracted from every pose (clamped to the pose
/// range).
Trajectory remove_mean(const Trajectory& traj);

/// Pitch/yaw given as pixel displacements at a focal length, roll in radians.
struct PixelParam {
  double p = 0.0;
  double y = 0.0;
  double r = 0.0;
  double focal = 1.0;
};

/// pose_s = (atan(p_s/f), atan(y_s/f), r_s). All entries must share one
/// positive focal length.
Trajectory from_pixel_params(std::span<const PixelParam> params);

struct TremorConfig {
  int timesteps = 25;
  double amplitude_deg = 1.0;
  double band_lo_hz = 6.0;
  double band_hi_hz = 12.0;
  double exposure_s = 0.1;
  std::uint64_t seed = 0;
  bool centered = true;

  void validate() const;
};

/// Seeded hand-shake model: per axis, a cubic drift through four random
/// control values plus three sinusoids drawn from the tremor band, sampled at
/// T instants over the exposure. The mean is removed when `centered`; each
/// axis is then rescaled so its peak |angle| equals the amplitude.
Trajectory generate_tremor(const TremorConfig& cfg);

/// Temporal-order guess for an unordered pose set: the extreme pose maximizes
/// the summed distance to all others, and poses are sorted by distance to it.
/// Ties go to the lower original index (summed distances within a relative
/// 1e-12 count as tied).
Trajectory order_heuristic(const Trajectory& traj);

/// n x n lattice over a W x H image with a half-cell margin.
std::vector<Point2> emd_grid(int width, int height, int per_axis = 5);

/// Earth mover's distance between two pose sets with equal unit masses. The
/// cost of matching a_i to b_j is the mean squared displacement between the
/// grid warped by each pose's homography; the optimal matching is solved
/// exactly. Throws InvalidArgument on a length mismatch or empty grid.
double emd_distance(const Trajectory& a, const Trajectory& b,
                    const CameraIntrinsics& k, std::span<const Point2> grid);

/// T x T cost matrix used by emd_distance.
Eigen::MatrixXd emd_cost_matrix(const Trajectory& a, const Trajectory& b,
                                const CameraIntrinsics& k,
                                std::span<const Point2> grid);

}  // namespace pmbm
