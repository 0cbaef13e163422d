#include "pmbm/geometry.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "pmbm/error.hpp"

namespace pmbm {
namespace {

constexpr double kSingularTol = 1e-12;

}  // namespace

CameraIntrinsics::CameraIntrinsics(double focal_px, double cx_px, double cy_px)
    : focal(focal_px), cx(cx_px), cy(cy_px) {
  if (!std::isfinite(focal) || !(focal > 0.0)) {
    throw InvalidArgument("focal length must be positive, got " +
                          std::to_string(focal));
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw InvalidArgument("principal point must be finite");
  }
}

CameraIntrinsics CameraIntrinsics::centered(double focal_px, int width,
                                            int height) {
  return {focal_px, (width - 1) / 2.0, (height - 1) / 2.0};
}

Mat3 CameraIntrinsics::matrix() const {
  Mat3 k;
  k << focal, 0.0, cx, 0.0, focal, cy, 0.0, 0.0, 1.0;
  return k;
}

Mat3 CameraIntrinsics::inverse_matrix() const {
  Mat3 k;
  k << 1.0 / focal, 0.0, -cx / focal, 0.0, 1.0 / focal, -cy / focal, 0.0, 0.0,
      1.0;
  return k;
}

CameraIntrinsics CameraIntrinsics::scaled(double factor) const {
  return {focal * factor, (cx + 0.5) * factor - 0.5, (cy + 0.5) * factor - 0.5};
}

PoseAngles::PoseAngles(double pitch, double yaw, double roll)
    : v_{pitch, yaw, roll} {
  for (double a : v_) {
    // Tolerate the rounding of atan(1) and friends at the bound.
    if (!std::isfinite(a) || std::abs(a) > kMaxAngle * (1.0 + 1e-15)) {
      throw DomainError("pose angle " + std::to_string(a) +
                        " rad is outside [-pi/4, pi/4]");
    }
  }
}

Homography::Homography(const Mat3& m) {
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det) < kSingularTol ||
      std::abs(m(2, 2)) < kSingularTol) {
    throw SingularError("homography is singular or not normalizable");
  }
  m_ = m / m(2, 2);
}

std::array<double, 9> Homography::row_major() const {
  return {m_(0, 0), m_(0, 1), m_(0, 2), m_(1, 0), m_(1, 1),
          m_(1, 2), m_(2, 0), m_(2, 1), m_(2, 2)};
}

Point2 Homography::apply(double x, double y) const {
  const double w = m_(2, 0) * x + m_(2, 1) * y + m_(2, 2);
  if (std::abs(w) < kSingularTol) {
    throw SingularError("point maps to infinity under the homography");
  }
  return {(m_(0, 0) * x + m_(0, 1) * y + m_(0, 2)) / w,
          (m_(1, 0) * x + m_(1, 1) * y + m_(1, 2)) / w};
}

Homography Homography::inverse() const { return Homography(m_.inverse()); }

double Homography::jacobian_det(double x, double y) const {
  const double u = m_(0, 0) * x + m_(0, 1) * y + m_(0, 2);
  const double v = m_(1, 0) * x + m_(1, 1) * y + m_(1, 2);
  const double w = m_(2, 0) * x + m_(2, 1) * y + m_(2, 2);
  if (std::abs(w) < kSingularTol) {
    throw SingularError("Jacobian requested at a point mapped to infinity");
  }
  const double w2 = w * w;
  const double dudx = (m_(0, 0) * w - u * m_(2, 0)) / w2;
  const double dudy = (m_(0, 1) * w - u * m_(2, 1)) / w2;
  const double dvdx = (m_(1, 0) * w - v * m_(2, 0)) / w2;
  const double dvdy = (m_(1, 1) * w - v * m_(2, 1)) / w2;
  return dudx * dvdy - dudy * dvdx;
}

Mat3 rotation_matrix(const PoseAngles& p) {
  return rotation_matrix(p.pitch(), p.yaw(), p.roll());
}

Mat3 rotation_matrix(double pitch, double yaw, double roll) {
  const double cx = std::cos(pitch), sx = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cz = std::cos(roll), sz = std::sin(roll);
  Mat3 rx, ry, rz;
  rx << 1, 0, 0, 0, cx, -sx, 0, sx, cx;
  ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  rz << cz, -sz, 0, sz, cz, 0, 0, 0, 1;
  return rz * ry * rx;
}

Homography homography_from_rotation(const Mat3& r, const CameraIntrinsics& k) {
  return Homography(k.matrix() * r * k.inverse_matrix());
}

Homography homography_from_pose(const PoseAngles& p, const CameraIntrinsics& k) {
  return homography_from_rotation(rotation_matrix(p), k);
}

PoseAngles reduce_pose_6d(const Pose6D& p) {
  if (!(p.d > 0.0)) throw DomainError("scene distance must be positive");
  const double ry = p.t_y / p.d;
  const double rx = p.t_x / p.d;
  if (std::abs(ry) > 1.0 || std::abs(rx) > 1.0) {
    throw DomainError("translation exceeds scene distance (|t/d| > 1)");
  }
  return {p.theta_x + std::asin(ry), p.theta_y + std::asin(-rx), p.theta_z};
}

}  // namespace pmbm
