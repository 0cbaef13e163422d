#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pmbm/geometry.hpp"
#include "pmbm/image.hpp"
#include "pmbm/restoration.hpp"
#include "pmbm/trajectory.hpp"

namespace pmbm {

struct RefineConfig {
  /// Cap on recorded iterates, the initial one included; 1 only evaluates.
  int max_iters = 30;
  /// Largest per-axis angle change of a full step (pitch, yaw, roll), radians.
  std::array<double, 3> step = {0.004, 0.004, 0.004};
  double fd_step = 1e-4;
  /// Seeded tremor starts tried besides the zero trajectory.
  int restarts = 2;
  int pyramid_levels = 2;
  /// Stop once an accepted step lowers the loss by less than this fraction.
  /// 0 runs until the line search fails or max_iters is reached.
  double tol = 0.0;
  std::uint64_t seed = 0;
  double init_amplitude_deg = 0.3;
  int timesteps = 9;
  double a_sat = 50.0;
  /// Shock-filter iterations applied to each restoration before it enters
  /// the loss. With 0 the zero trajectory fits any blurry input almost
  /// perfectly; positive values break that tie but also pull sharp inputs
  /// toward a small nonzero blur.
  int shock_iters = 0;
  /// Subtract the mean pose after every pyramid level. A common rotation of
  /// all poses is (up to borders) absorbed by the restoration, so the loss
  /// cannot pin it down.
  bool center = true;
  /// Called after every accepted step with the iterate index, trajectory
  /// and loss (progress logging).
  std::function<void(int, const Trajectory&, double)> observer;

  void validate() const;
};

struct RestartSummary {
  std::string label;
  Trajectory initial = Trajectory::zeros(1);
  Trajectory final_trajectory = Trajectory::zeros(1);
  double final_loss = 0.0;
  bool failed = false;
  std::string error;
};

struct RefineReport {
  /// Loss at every accepted iterate of the winning run (finest level).
  std::vector<double> loss_trace;
  Trajectory trajectory = Trajectory::zeros(1);
  ImageF restoration;
  std::vector<RestartSummary> restarts;
  int winner = 0;
  int loss_evaluations = 0;
};

/// sum (R(B u_hat) - v)^2 with B built from traj (Clamp boundary).
double reblur_loss(const ImageF& v, const Trajectory& traj,
                   const CameraIntrinsics& k, const ImageF& u_hat,
                   double a_sat = 50.0);

/// Alternates restoration (u_hat = admm(v, B(traj))) and gradient descent
/// on the 3T angles with u_hat fixed. Gradients are central differences;
/// each step is halved up to 8 times until the loss drops. The trace is
/// strictly decreasing.
RefineReport refine_trajectory(const ImageF& v, const Trajectory& init,
                               const CameraIntrinsics& k, const RefineConfig& cfg,
                               const AdmmConfig& admm);

/// Multi-start, coarse-to-fine refinement from the zero trajectory and
/// `restarts` small seeded tremors. The run with the lowest full-resolution
/// loss wins. Throws ComputeError if every run fails.
RefineReport blind_deblur(const ImageF& v, const CameraIntrinsics& k,
                          const RefineConfig& cfg, const AdmmConfig& admm);

nlohmann::json refine_report_to_json(const RefineReport& report, double focal_px);

}  // namespace pmbm
