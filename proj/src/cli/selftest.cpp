#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "pmbm/blur_operator.hpp"
#include "pmbm/cli.hpp"
#include "pmbm/evaluation.hpp"
#include "pmbm/sparse_oracle.hpp"

namespace pmbm::cli {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Trajectory sweep(int axis, double amplitude, int timesteps) {
  std::vector<PoseAngles> poses;
  for (int t = 0; t < timesteps; ++t) {
    const double a = amplitude * (2.0 * t / (timesteps - 1) - 1.0);
    poses.emplace_back(axis == 0 ? a : 0.0, axis == 1 ? a : 0.0, axis == 2 ? a : 0.0);
  }
  return Trajectory(std::move(poses));
}

SelftestCheck adjointness(double corruption) {
  const int w = 320, h = 240;
  const auto k = CameraIntrinsics::centered(1000.0, w, h);
  const ImageF u = synthetic_scene(w, h, 1, 11);
  double worst = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    BlurOperator op(sweep(axis, 2.0 * kDeg, 9), k, w, h, AdjointMode::ExactInverse,
                    BoundaryPolicy::Zero);
    if (corruption != 0.0) op = op.with_corrupted_offsets(corruption);
    for (int gy = 0; gy < 3; ++gy) {
      for (int gx = 0; gx < 3; ++gx) {
        const ImageF probe =
            gaussian_probe(w, h, 1, (gx + 0.5) * w / 3.0, (gy + 0.5) * h / 3.0, 3.0);
        worst = std::max(worst, adjoint_discrepancy(op, u, probe));
      }
    }
  }
  return {"adjointness", worst < 0.01, "max discrepancy " + fmt("%.3g%%", 100.0 * worst)};
}

SelftestCheck jacobian() {
  const int w = 1024, h = 680;
  const auto k = CameraIntrinsics::centered(1000.0, w, h);
  double roll_dev = 0.0, tilt_dev = 0.0;
  for (double a : {-1.0 * kDeg, 1.0 * kDeg}) {
    const Homography roll = homography_from_pose(PoseAngles(0, 0, a), k);
    const Homography pitch = homography_from_pose(PoseAngles(a, 0, 0), k);
    const Homography yaw = homography_from_pose(PoseAngles(0, a, 0), k);
    for (int y = 0; y < h; y += 17) {
      for (int x = 0; x < w; x += 17) {
        roll_dev = std::max(roll_dev, std::abs(roll.jacobian_det(x, y) - 1.0));
        tilt_dev = std::max(tilt_dev, std::abs(pitch.jacobian_det(x, y) - 1.0));
        tilt_dev = std::max(tilt_dev, std::abs(yaw.jacobian_det(x, y) - 1.0));
      }
    }
  }
  return {"jacobian", roll_dev < 1e-10 && tilt_dev <= 0.05,
          "roll " + fmt("%.2g", roll_dev) + ", pitch/yaw at 1 deg " + fmt("%.3g", tilt_dev)};
}

SelftestCheck oracle_equivalence() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double naive_eff = 0.0, naive_sparse = 0.0;
  for (int c = 0; c < 6; ++c) {
    const int side = 8 + 2 * c;
    const int timesteps = c % 2 ? 9 : 4;
    std::vector<PoseAngles> poses;
    for (int t = 0; t < timesteps; ++t) {
      poses.emplace_back((unit(rng) - 0.5) * kDeg, (unit(rng) - 0.5) * kDeg,
                         (unit(rng) - 0.5) * kDeg);
    }
    const Trajectory traj(poses);
    const auto k = CameraIntrinsics::centered(side * 2.0, side, side);
    std::vector<double> px(static_cast<std::size_t>(side) * side);
    for (double& v : px) v = unit(rng);
    const ImageF u(side, side, 1, px);
    const BlurOperator op(traj, k, side, side, AdjointMode::ExactInverse, BoundaryPolicy::Zero);
    const ImageF a = blur_naive(u, op);
    const ImageF b = blur_efficient(u, op);
    const ImageF s = build_sparse_oracle(traj, k, side, side).multiply(u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      naive_eff = std::max(naive_eff, std::abs(a.data()[i] - b.data()[i]));
      naive_sparse = std::max(naive_sparse, std::abs(a.data()[i] - s.data()[i]));
    }
  }
  return {"oracle-equivalence", naive_eff <= 1e-12 && naive_sparse <= 1e-10,
          "naive/efficient " + fmt("%.2g", naive_eff) + ", naive/sparse " +
              fmt("%.2g", naive_sparse)};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(double offset_corruption) {
  return {adjointness(offset_corruption), jacobian(), oracle_equivalence()};
}

}  // namespace pmbm::cli
