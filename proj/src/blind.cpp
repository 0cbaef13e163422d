#include "pmbm/blind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pmbm/blur_operator.hpp"
#include "pmbm/error.hpp"
#include "pmbm/evaluation.hpp"
#include "pmbm/serialization.hpp"

namespace pmbm {
namespace {

using Angles = std::vector<double>;  // 3T values, pose-major

Angles flatten(const Trajectory& traj) {
  Angles a;
  for (const auto& p : traj) a.insert(a.end(), p.as_array().begin(), p.as_array().end());
  return a;
}

Trajectory unflatten(const Angles& a) {
  std::vector<PoseAngles> poses;
  for (std::size_t i = 0; i < a.size(); i += 3) {
    auto lim = [](double v) {
      return std::clamp(v, -PoseAngles::kMaxAngle, PoseAngles::kMaxAngle);
    };
    poses.emplace_back(lim(a[i]), lim(a[i + 1]), lim(a[i + 2]));
  }
  return Trajectory(std::move(poses));
}

struct Problem {
  const ImageF& v;
  const CameraIntrinsics& k;
  const RefineConfig& cfg;
  const AdmmConfig& admm;
  int evaluations = 0;

  double loss(const Angles& a, const ImageF& u_hat) {
    ++evaluations;
    return reblur_loss(v, unflatten(a), k, u_hat, cfg.a_sat);
  }

  ImageF restore(const Angles& a) const {
    const BlurOperator op(unflatten(a), k, v.width(), v.height());
    return admm_deblur(v, op, admm);
  }

  // Image the loss compares against for trajectory a.
  ImageF reference(const Angles& a) const {
    ImageF u = restore(a);
    return cfg.shock_iters > 0 ? shock_filter(u, cfg.shock_iters) : u;
  }
};

}  // namespace

void RefineConfig::validate() const {
  if (max_iters < 1) throw InvalidArgument("refine: max_iters must be >= 1");
  if (!(fd_step > 0.0)) throw InvalidArgument("refine: fd_step must be > 0");
  if (restarts < 0) throw InvalidArgument("refine: restarts must be >= 0");
  if (pyramid_levels < 1) throw InvalidArgument("refine: pyramid_levels must be >= 1");
  if (timesteps < 1) throw InvalidArgument("refine: timesteps must be >= 1");
  if (!(tol >= 0.0)) throw InvalidArgument("refine: tol must be >= 0");
  if (shock_iters < 0) throw InvalidArgument("refine: shock_iters must be >= 0");
  if (!(a_sat > 0.0)) throw InvalidArgument("refine: a_sat must be > 0");
  if (!(init_amplitude_deg > 0.0)) throw InvalidArgument("refine: init amplitude must be > 0");
  for (double s : step) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("refine: steps must be positive");
  }
}

double reblur_loss(const ImageF& v, const Trajectory& traj,
                   const CameraIntrinsics& k, const ImageF& u_hat, double a_sat) {
  require_same_shape(v, u_hat, "reblur_loss");
  const BlurOperator op(traj, k, v.width(), v.height());
  const ImageF r = saturate(blur_efficient(u_hat, op), a_sat);
  return squared_norm(r - v);
}

RefineReport refine_trajectory(const ImageF& v, const Trajectory& init,
                               const CameraIntrinsics& k, const RefineConfig& cfg,
                               const AdmmConfig& admm) {
  cfg.validate();
  admm.validate();
  Problem pb{v, k, cfg, admm};
  Angles theta = flatten(init);
  ImageF u_hat = pb.reference(theta);
  double loss = pb.loss(theta, u_hat);
  RefineReport rep;
  rep.loss_trace.push_back(loss);

  while (static_cast<int>(rep.loss_trace.size()) < cfg.max_iters) {
    Angles grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
      Angles hi = theta, lo = theta;
      hi[i] += cfg.fd_step;
      lo[i] -= cfg.fd_step;
      grad[i] = (pb.loss(hi, u_hat) - pb.loss(lo, u_hat)) / (2.0 * cfg.fd_step);
    }
    // Per-axis scaling: the largest component on each axis moves by step[axis].
    std::array<double, 3> peak{};
    for (std::size_t i = 0; i < grad.size(); ++i) {
      peak[i % 3] = std::max(peak[i % 3], std::abs(grad[i]));
    }
    Angles dir(theta.size(), 0.0);
    bool any = false;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      if (peak[i % 3] > 0.0) {
        dir[i] = -cfg.step[i % 3] * grad[i] / peak[i % 3];
        any = true;
      }
    }
    if (!any) break;

    bool accepted = false;
    Angles cand;
    double cand_loss = loss;
    double scale = 1.0;
    for (int halving = 0; halving <= 8; ++halving, scale *= 0.5) {
      cand = theta;
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] += scale * dir[i];
      cand = flatten(unflatten(cand));
      cand_loss = pb.loss(cand, u_hat);
      if (cand_loss < loss) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    // Refresh the restoration; keep the old one if it fits worse.
    ImageF fresh = pb.reference(cand);
    const double fresh_loss = pb.loss(cand, fresh);
    if (fresh_loss <= cand_loss) {
      u_hat = std::move(fresh);
      cand_loss = fresh_loss;
    }
    const double previous = loss;
    theta = std::move(cand);
    loss = cand_loss;
    rep.loss_trace.push_back(loss);
    if (cfg.observer) {
      cfg.observer(static_cast<int>(rep.loss_trace.size()) - 1, unflatten(theta), loss);
    }
    if (previous - loss < cfg.tol * previous) break;
  }

  rep.trajectory = unflatten(theta);
  rep.restoration = cfg.shock_iters > 0 ? pb.restore(theta) : std::move(u_hat);
  rep.loss_evaluations = pb.evaluations;
  return rep;
}

RefineReport blind_deblur(const ImageF& v, const CameraIntrinsics& k,
                          const RefineConfig& cfg, const AdmmConfig& admm) {
  cfg.validate();
  admm.validate();
  std::vector<std::pair<std::string, Trajectory>> starts;
  starts.emplace_back("zero", Trajectory::zeros(cfg.timesteps));
  for (int r = 0; r < cfg.restarts; ++r) {
    TremorConfig tc;
    tc.timesteps = cfg.timesteps;
    tc.amplitude_deg = cfg.init_amplitude_deg;
    tc.seed = cfg.seed + static_cast<std::uint64_t>(r);
    starts.emplace_back("tremor-" + std::to_string(r), generate_tremor(tc));
  }

  // Pyramid: level l has the image box-downsampled l times.
  std::vector<ImageF> levels{v};
  std::vector<CameraIntrinsics> cams{k};
  for (int l = 1; l < cfg.pyramid_levels; ++l) {
    if (levels.back().width() < 16 || levels.back().height() < 16) break;
    levels.push_back(downsample2(levels.back()));
    cams.push_back(cams.back().scaled(0.5));
  }

  RefineReport best;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<RestartSummary> summaries;
  int evaluations = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    RestartSummary sum;
    sum.label = starts[s].first;
    sum.initial = sum.final_trajectory = starts[s].second;
    try {
      Trajectory traj = starts[s].second;
      RefineReport rep;
      for (int l = static_cast<int>(levels.size()) - 1; l >= 0; --l) {
        rep = refine_trajectory(levels[l], traj, cams[l], cfg, admm);
        evaluations += rep.loss_evaluations;
        traj = cfg.center ? remove_mean(rep.trajectory) : rep.trajectory;
      }
      double final_loss = rep.loss_trace.back();
      if (!(traj == rep.trajectory)) {
        // Re-restore under the centered poses. The trace keeps the refined
        // iterates; the start is ranked by the centered estimate.
        Problem pb{v, k, cfg, admm};
        const Angles theta = flatten(traj);
        final_loss = pb.loss(theta, pb.reference(theta));
        rep.restoration = pb.restore(theta);
        rep.trajectory = traj;
        evaluations += pb.evaluations;
      }
      sum.final_trajectory = rep.trajectory;
      sum.final_loss = final_loss;
      if (sum.final_loss < best_loss) {
        best_loss = sum.final_loss;
        best = std::move(rep);
        best.winner = static_cast<int>(s);
      }
    } catch (const ComputeError& e) {
      sum.failed = true;
      sum.error = e.what();
    }
    summaries.push_back(std::move(sum));
  }
  if (!std::isfinite(best_loss)) {
    std::string msg = "blind deblurring failed on every start:";
    for (const auto& s : summaries) msg += " [" + s.label + ": " + s.error + "]";
    throw ComputeError(msg);
  }
  best.restarts = std::move(summaries);
  best.loss_evaluations = evaluations;
  return best;
}

nlohmann::json refine_report_to_json(const RefineReport& report, double focal_px) {
  nlohmann::json restarts = nlohmann::json::array();
  for (const auto& s : report.restarts) {
    nlohmann::json r = {{"label", s.label}, {"failed", s.failed}};
    if (s.failed) {
      r["error"] = s.error;
    } else {
      r["final_loss"] = s.final_loss;
      r["trajectory"] = trajectory_to_json(s.final_trajectory, focal_px);
    }
    restarts.push_back(std::move(r));
  }
  return {{"loss_trace", report.loss_trace},
          {"winner", report.winner},
          {"loss_evaluations", report.loss_evaluations},
          {"restarts", std::move(restarts)},
          {"trajectory", trajectory_to_json(report.trajectory, focal_px)}};
}

}  // namespace pmbm
