#include <cmath>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "pmbm/error.hpp"
#include "pmbm/geometry.hpp"
#include "test_util.hpp"

using namespace pmbm;
using namespace pmbm::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_dev(const Mat3& a, const Mat3& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Intrinsics, Validation) {
  EXPECT_THROW(CameraIntrinsics(0.0, 1, 1), InvalidArgument);
  EXPECT_THROW(CameraIntrinsics(-5.0, 1, 1), InvalidArgument);
  EXPECT_THROW(CameraIntrinsics(1.0, NAN, 1), InvalidArgument);
  auto k = CameraIntrinsics::centered(500, 64, 48);
  EXPECT_DOUBLE_EQ(k.cx, 31.5);
  EXPECT_DOUBLE_EQ(k.cy, 23.5);
  EXPECT_LT(max_dev(k.matrix() * k.inverse_matrix(), Mat3::Identity()), 1e-15);
}

TEST(PoseAngles, RangeEnforced) {
  EXPECT_THROW(PoseAngles(0.0, 0.0, 0.8), DomainError);
  EXPECT_THROW(PoseAngles(NAN, 0.0, 0.0), DomainError);
  EXPECT_NO_THROW(PoseAngles(kPi / 4, -kPi / 4, 0.0));
}

TEST(RotationMatrix, Examples) {
  EXPECT_EQ(rotation_matrix(PoseAngles(0, 0, 0)), Mat3::Identity());
  Mat3 quarter;
  quarter << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LT(max_dev(rotation_matrix(0, 0, kPi / 2), quarter), 1e-15);
  Mat3 r = rotation_matrix(PoseAngles(0.01, -0.02, 0.005));
  EXPECT_LT(max_dev(r.transpose() * r, Mat3::Identity()), 1e-12);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(RotationMatrix, CompositionOrderIsZYX) {
  double a = 0.1, b = -0.2, c = 0.3;
  Mat3 want = rotation_matrix(0, 0, c) * rotation_matrix(0, b, 0) * rotation_matrix(a, 0, 0);
  EXPECT_LT(max_dev(rotation_matrix(a, b, c), want), 1e-15);
  // right-handed about x: y axis goes to +z
  Eigen::Vector3d ey = rotation_matrix(kPi / 2, 0, 0) * Eigen::Vector3d::UnitY();
  EXPECT_NEAR(ey.z(), 1.0, 1e-15);
}

TEST(Homography, FromPoseExamples) {
  auto k = CameraIntrinsics(800, 40, 30);
  EXPECT_LT(max_dev(homography_from_pose({0, 0, 0}, k).matrix(), Mat3::Identity()), 1e-15);

  Homography roll = homography_from_pose({0, 0, 0.3}, k);
  Point2 c = roll.apply(k.cx, k.cy);
  EXPECT_NEAR(c.x, k.cx, 1e-12);
  EXPECT_NEAR(c.y, k.cy, 1e-12);

  // Oracle: K R K^-1 applied to the homogeneous origin, evaluated directly.
  auto k0 = CameraIntrinsics(1000, 0, 0);
  Homography yaw = homography_from_pose({0, 0.01, 0}, k0);
  Point2 o = yaw.apply(0, 0);
  Eigen::Vector3d h = k0.matrix() * rotation_matrix(0, 0.01, 0) * Eigen::Vector3d(0, 0, 1);
  EXPECT_NEAR(o.x, h.x() / h.z(), 1e-12);
  EXPECT_NEAR(std::abs(o.x), 1000 * std::tan(0.01), 1e-3);
  EXPECT_NEAR(std::abs(o.x), 10.0003, 1e-4);
  EXPECT_NEAR(o.y, 0.0, 1e-12);
  EXPECT_EQ(yaw.matrix()(2, 2), 1.0);
}

TEST(Homography, QuarterRollMapsAxis) {
  auto k = CameraIntrinsics(500, 20, 10);
  Homography h = homography_from_rotation(rotation_matrix(0, 0, kPi / 2), k);
  Point2 p = h.apply(k.cx + 10, k.cy);
  EXPECT_NEAR(p.x, k.cx, 1e-12);
  EXPECT_NEAR(p.y, k.cy + 10, 1e-12);
}

TEST(Homography, ApplyIdentityAndSingular) {
  Homography id;
  Point2 p = id.apply(3.25, -7.5);
  EXPECT_EQ(p.x, 3.25);
  EXPECT_EQ(p.y, -7.5);
  Mat3 m = Mat3::Identity();
  m(2, 0) = 1.0;  // denominator x + 1
  Homography h(m);
  EXPECT_THROW(h.apply(-1.0, 5.0), SingularError);
  EXPECT_THROW(Homography(Mat3::Zero()), SingularError);
}

TEST(Homography, RoundTripThroughInverse) {
  Gen g(10);
  auto k = CameraIntrinsics::centered(700, 320, 240);
  for (int trial = 0; trial < 100; ++trial) {
    Homography h = homography_from_pose(g.pose(0.05), k);
    Homography hi = invert(h);
    EXPECT_LT(max_dev((h * hi).matrix(), Mat3::Identity()), 1e-10);
    for (int j = 0; j < 10; ++j) {
      double x = g.uniform(0, 320), y = g.uniform(0, 240);
      Point2 q = hi.apply(h.apply(x, y));
      ASSERT_LT(std::hypot(q.x - x, q.y - y), 1e-9);
    }
  }
  EXPECT_LT(max_dev(invert(Homography()).matrix(), Mat3::Identity()), 1e-15);
}

TEST(Homography, RollInverseIsNegatedRoll) {
  auto k = CameraIntrinsics::centered(600, 100, 80);
  for (double t : {0.01, 0.2, -0.7}) {
    EXPECT_LT(max_dev(invert(homography_from_pose({0, 0, t}, k)).matrix(),
                      homography_from_pose({0, 0, -t}, k).matrix()),
              1e-12);
  }
}

TEST(HomographyProperty, NegatedPoseVersusInverse) {
  Gen g(11);
  auto k = CameraIntrinsics::centered(900, 200, 150);
  for (int axis = 0; axis < 3; ++axis) {
    std::array<double, 3> v{0, 0, 0};
    v[axis] = 0.04;
    PoseAngles p(v[0], v[1], v[2]), n(-v[0], -v[1], -v[2]);
    EXPECT_LT(max_dev(homography_from_pose(n, k).matrix(),
                      invert(homography_from_pose(p, k)).matrix()),
              1e-12);
  }
  // mixed axes do not commute, so -p is not the inverse
  PoseAngles p(0.04, -0.03, 0.05), n(-0.04, 0.03, -0.05);
  EXPECT_GT(max_dev(homography_from_pose(n, k).matrix(),
                    invert(homography_from_pose(p, k)).matrix()),
            1e-6);
}

TEST(HomographyProperty, CompositionMatchesProduct) {
  Gen g(12);
  auto k = CameraIntrinsics::centered(750, 64, 64);
  for (int trial = 0; trial < 50; ++trial) {
    PoseAngles a = g.pose(0.1), b = g.pose(0.1);
    Homography composed =
        homography_from_rotation(rotation_matrix(a) * rotation_matrix(b), k);
    Homography product = homography_from_pose(a, k) * homography_from_pose(b, k);
    ASSERT_LT(max_dev(composed.matrix(), product.matrix()), 1e-10);
  }
}

TEST(ReducePose6D, Examples) {
  Pose6D p{0.01, -0.02, 0.03, 0, 0, 0, 5.0};
  PoseAngles r = reduce_pose_6d(p);
  EXPECT_EQ(r.pitch(), 0.01);
  EXPECT_EQ(r.yaw(), -0.02);
  EXPECT_EQ(r.roll(), 0.03);

  Pose6D q{0, 0, 0, 0, 10.0 * std::sin(0.01), 0, 10.0};
  EXPECT_NEAR(reduce_pose_6d(q).pitch(), 0.01, 1e-15);

  Pose6D s{0.005, 0, 0.002, 0.1, -0.2, 0, 100};
  PoseAngles rs = reduce_pose_6d(s);
  EXPECT_DOUBLE_EQ(rs.pitch(), 0.005 + std::asin(-0.002));
  EXPECT_DOUBLE_EQ(rs.yaw(), std::asin(-0.001));
  EXPECT_DOUBLE_EQ(rs.roll(), 0.002);

  EXPECT_THROW(reduce_pose_6d(Pose6D{0, 0, 0, 2.0, 0, 0, 1.0}), DomainError);
  EXPECT_THROW(reduce_pose_6d(Pose6D{0, 0, 0, 0, -1.5, 0, 1.0}), DomainError);
}

TEST(JacobianDet, IdentityAndRoll) {
  EXPECT_EQ(jacobian_det(Homography(), 12, 40), 1.0);
  Gen g(13);
  auto k = CameraIntrinsics::centered(1000, 1024, 680);
  for (int trial = 0; trial < 200; ++trial) {
    Homography h = homography_from_pose({0, 0, g.uniform(-0.7, 0.7)}, k);
    ASSERT_NEAR(h.jacobian_det(g.uniform(0, 1024), g.uniform(0, 680)), 1.0, 1e-12);
  }
}

TEST(JacobianDetProperty, MatchesFiniteDifferences) {
  Gen g(14);
  auto k = CameraIntrinsics::centered(800, 400, 300);
  const double e = 1e-4;
  for (int trial = 0; trial < 100; ++trial) {
    Homography h = homography_from_pose(g.pose(0.05), k);
    double x = g.uniform(0, 400), y = g.uniform(0, 300);
    Point2 xp = h.apply(x + e, y), xm = h.apply(x - e, y);
    Point2 yp = h.apply(x, y + e), ym = h.apply(x, y - e);
    double j00 = (xp.x - xm.x) / (2 * e), j10 = (xp.y - xm.y) / (2 * e);
    double j01 = (yp.x - ym.x) / (2 * e), j11 = (yp.y - ym.y) / (2 * e);
    double fd = j00 * j11 - j01 * j10;
    ASSERT_NEAR(h.jacobian_det(x, y), fd, 1e-5 * std::abs(fd));
  }
}

TEST(JacobianDet, PitchYawAtTwoDegreesOnWideFrame) {
  // Recorded measurement: the worst case over the full 1024x680 pixel grid.
  auto k = CameraIntrinsics::centered(1000, 1024, 680);
  double worst = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    for (double a : {-2 * kDeg, 2 * kDeg}) {
      std::array<double, 3> v{0, 0, 0};
      v[axis] = a;
      Homography h = homography_from_pose({v[0], v[1], v[2]}, k);
      for (int y = 0; y < 680; y += 17)
        for (int x = 0; x < 1024; x += 16)
          worst = std::max(worst, std::abs(h.jacobian_det(x, y) - 1.0));
      worst = std::max(worst, std::abs(h.jacobian_det(1023, 679) - 1.0));
      worst = std::max(worst, std::abs(h.jacobian_det(0, 0) - 1.0));
    }
  }
  // det J = 1/w^3 with w the projective denominator; worst at |x - cx| = 511.5
  double t = 2 * kDeg;
  double edge = 1.0 / std::pow(std::cos(t) - 0.5115 * std::sin(t), 3) - 1.0;
  EXPECT_NEAR(worst, edge, 1e-9);
  EXPECT_LT(worst, 0.06);
}
