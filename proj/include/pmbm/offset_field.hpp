#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "pmbm/geometry.hpp"
#include "pmbm/trajectory.hpp"

namespace pmbm {

/// Per-pixel, per-timestep displacement (dx, dy) in continuous pixels.
/// Layout: t-major, then row-major, one array per component.
class OffsetField {
 public:
  OffsetField(int width, int height, int timesteps);
  /// Throws InvalidArgument on a length mismatch or non-finite entry.
  OffsetField(int width, int height, int timesteps, std::vector<double> dx,
              std::vector<double> dy);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int timesteps() const noexcept { return timesteps_; }
  std::size_t frame_size() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }

  const double* dx(int t) const { return dx_.data() + t * frame_size(); }
  const double* dy(int t) const { return dy_.data() + t * frame_size(); }
  double* dx(int t) { return dx_.data() + t * frame_size(); }
  double* dy(int t) { return dy_.data() + t * frame_size(); }

  Point2 at(int t, int x, int y) const {
    const std::size_t k = t * frame_size() + static_cast<std::size_t>(y) * width_ + x;
    return {dx_[k], dy_[k]};
  }

  std::span<const double> dx_all() const noexcept { return dx_; }
  std::span<const double> dy_all() const noexcept { return dy_; }

 private:
  int width_;
  int height_;
  int timesteps_;
  std::vector<double> dx_;
  std::vector<double> dy_;
};

/// Delta_t(i) = map_t(i) - i for every pixel and map.
OffsetField offsets_from_maps(std::span<const Homography> maps, int width,
                              int height);

/// Forward blur offsets Delta_t(i) = H_t^-1(i) - i with H_t = K R_t K^-1.
OffsetField offsets_from_trajectory(const Trajectory& traj,
                                    const CameraIntrinsics& k, int width,
                                    int height);

/// Little-endian dump: "PMBM", u32 W, H, T, then all dx as f32 (t-major),
/// then all dy.
void save_offsets(const OffsetField& field, const std::filesystem::path& path);
/// Reads a dump back (values are the f32-rounded offsets).
OffsetField load_offsets(const std::filesystem::path& path);

}  // namespace pmbm
