#pragma once

#include <array>

#include <Eigen/Core>

namespace pmbm {

using Mat3 = Eigen::Matrix3d;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Pinhole intrinsics with square pixels and no skew.
struct CameraIntrinsics {
  double focal = 1.0;  // pixels
  double cx = 0.0;
  double cy = 0.0;

  /// Throws InvalidArgument unless focal > 0 and every field is finite.
  CameraIntrinsics(double focal_px, double cx_px, double cy_px);

  /// Principal point at the image center ((W-1)/2, (H-1)/2).
  static CameraIntrinsics centered(double focal_px, int width, int height);

  Mat3 matrix() const;
  Mat3 inverse_matrix() const;

  /// Intrinsics of the same camera after resampling the image by `factor`
  /// (0.5 halves the resolution). Pixel centers follow the (x+0.5)*s-0.5 rule.
  CameraIntrinsics scaled(double factor) const;
};

/// Camera rotation as pitch (about x), yaw (about y), roll (about the optical
/// axis), in radians. Each angle must be finite with magnitude <= pi/4.
class PoseAngles {
 public:
  PoseAngles() = default;
  PoseAngles(double pitch, double yaw, double roll);

  double pitch() const noexcept { return v_[0]; }
  double yaw() const noexcept { return v_[1]; }
  double roll() const noexcept { return v_[2]; }
  /// Axis access: 0 pitch, 1 yaw, 2 roll.
  double operator[](int axis) const { return v_[axis]; }
  const std::array<double, 3>& as_array() const noexcept { return v_; }

  static constexpr double kMaxAngle = 0.78539816339744830962;  // pi/4

  friend bool operator==(const PoseAngles&, const PoseAngles&) = default;

 private:
  std::array<double, 3> v_{0.0, 0.0, 0.0};
};

/// Full rigid pose against a fronto-parallel plane at distance d.
struct Pose6D {
  double theta_x = 0.0, theta_y = 0.0, theta_z = 0.0;
  double t_x = 0.0, t_y = 0.0, t_z = 0.0;
  double d = 1.0;
};

/// Planar projective map, stored with H(2,2) == 1.
class Homography {
 public:
  Homography() : m_(Mat3::Identity()) {}
  /// Normalizes by the bottom-right entry; throws SingularError when the
  /// matrix is singular or cannot be normalized.
  explicit Homography(const Mat3& m);

  const Mat3& matrix() const noexcept { return m_; }
  /// Row-major copy for the warp kernels.
  std::array<double, 9> row_major() const;

  /// Throws SingularError when the projective denominator is within 1e-12
  /// of zero.
  Point2 apply(double x, double y) const;
  Point2 apply(Point2 p) const { return apply(p.x, p.y); }

  Homography inverse() const;

  /// Determinant of the 2x2 Jacobian of the projective map at (x, y).
  double jacobian_det(double x, double y) const;

  friend Homography operator*(const Homography& a, const Homography& b) {
    return Homography(a.m_ * b.m_);
  }

 private:
  Mat3 m_;
};

/// R = Rz(roll) * Ry(yaw) * Rx(pitch).
Mat3 rotation_matrix(const PoseAngles& p);
/// Same composition without the PoseAngles range check, for geometry that
/// is not a camera-shake pose (e.g. quarter turns).
Mat3 rotation_matrix(double pitch, double yaw, double roll);

/// H = K R K^-1, normalized.
Homography homography_from_pose(const PoseAngles& p, const CameraIntrinsics& k);

/// Rotation-only homography for an arbitrary rotation matrix.
Homography homography_from_rotation(const Mat3& r, const CameraIntrinsics& k);

/// Absorbs small in-plane translations into equivalent rotations:
/// (tx + asin(ty/d), ty + asin(-tx/d), tz). Throws DomainError for |t/d| > 1.
PoseAngles reduce_pose_6d(const Pose6D& p);

// Free-function spellings of the Homography members.
inline Point2 apply(const Homography& h, double x, double y) { return h.apply(x, y); }
inline Homography invert(const Homography& h) { return h.inverse(); }
inline double jacobian_det(const Homography& h, double x, double y) {
  return h.jacobian_det(x, y);
}

}  // namespace pmbm
