#include "pmbm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "pmbm/assignment.hpp"
#include "pmbm/error.hpp"

namespace pmbm {

Trajectory::Trajectory(std::vector<PoseAngles> poses) : poses_(std::move(poses)) {
  if (poses_.empty()) throw InvalidArgument("trajectory needs at least one pose");
}

Trajectory Trajectory::zeros(int timesteps) {
  if (timesteps < 1) throw InvalidArgument("trajectory needs at least one pose");
  return Trajectory(std::vector<PoseAngles>(timesteps));
}

Trajectory Trajectory::permuted(std::span<const int> order) const {
  if (static_cast<int>(order.size()) != size()) {
    throw InvalidArgument("permutation length does not match trajectory");
  }
  std::vector<PoseAngles> out;
  out.reserve(order.size());
  for (int idx : order) out.push_back(poses_.at(idx));
  return Trajectory(std::move(out));
}

double Trajectory::max_abs_angle() const {
  double m = 0.0;
  for (const auto& p : poses_) {
    for (double a : p.as_array()) m = std::max(m, std::abs(a));
  }
  return m;
}

Trajectory from_pixel_params(std::span<const PixelParam> params) {
  if (params.empty()) throw InvalidArgument("no pixel parameters given");
  const double focal = params.front().focal;
  if (!(focal > 0.0) || !std::isfinite(focal)) {
    throw InvalidArgument("focal length must be positive");
  }
  std::vector<PoseAngles> poses;
  poses.reserve(params.size());
  for (const auto& q : params) {
    if (q.focal != focal) {
      throw InvalidArgument("pixel parameters must share one focal length");
    }
    poses.emplace_back(std::atan(q.p / focal), std::atan(q.y / focal), q.r);
  }
  return Trajectory(std::move(poses));
}

void TremorConfig::validate() const {
  if (timesteps < 2) throw InvalidArgument("tremor needs at least 2 timesteps");
  if (!(amplitude_deg > 0.0)) throw InvalidArgument("amplitude must be positive");
  if (!(band_lo_hz > 0.0) || !(band_lo_hz < band_hi_hz)) {
    throw InvalidArgument("tremor band must satisfy 0 < lo < hi");
  }
  if (!(exposure_s > 0.0)) throw InvalidArgument("exposure must be positive");
  if (amplitude_deg * std::numbers::pi / 180.0 > PoseAngles::kMaxAngle) {
    throw InvalidArgument("amplitude exceeds the supported pose range");
  }
}

Trajectory generate_tremor(const TremorConfig& cfg) {
  cfg.validate();
  const int n = cfg.timesteps;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> band(cfg.band_lo_hz, cfg.band_hi_hz);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> gain(0.5, 1.0);

  const double amplitude = cfg.amplitude_deg * std::numbers::pi / 180.0;
  std::array<std::vector<double>, 3> axes;
  for (auto& signal : axes) {
    // Drift: Lagrange cubic through control values at tau = 0, 1/3, 2/3, 1.
    std::array<double, 4> control;
    for (double& c : control) c = 0.5 * unit(rng);
    struct Wave {
      double freq, phase, gain;
    };
    std::array<Wave, 3> waves;
    for (auto& w : waves) {
      w.freq = band(rng);
      w.phase = phase(rng);
      w.gain = gain(rng);
    }

    signal.resize(n);
    for (int s = 0; s < n; ++s) {
      const double tau = static_cast<double>(s) / (n - 1);
      const double time = tau * cfg.exposure_s;
      double drift = 0.0;
      for (int k = 0; k < 4; ++k) {
        double basis = 1.0;
        for (int m = 0; m < 4; ++m) {
          if (m != k) basis *= (tau - m / 3.0) / (k / 3.0 - m / 3.0);
        }
        drift += control[k] * basis;
      }
      double tremor = 0.0;
      for (const auto& w : waves) {
        tremor += w.gain * std::sin(2.0 * std::numbers::pi * w.freq * time + w.phase);
      }
      signal[s] = drift + tremor;
    }

    if (cfg.centered) {
      const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / n;
      for (double& v : signal) v -= mean;
    }
    double peak = 0.0;
    for (double v : signal) peak = std::max(peak, std::abs(v));
    const double scale = peak > 0.0 ? amplitude / peak : 0.0;
    for (double& v : signal) v *= scale;
  }

  std::vector<PoseAngles> poses;
  poses.reserve(n);
  for (int s = 0; s < n; ++s) poses.emplace_back(axes[0][s], axes[1][s], axes[2][s]);
  return Trajectory(std::move(poses));
}

namespace {

double angle_distance(const PoseAngles& a, const PoseAngles& b) {
  const double d0 = a.pitch() - b.pitch();
  const double d1 = a.yaw() - b.yaw();
  const double d2 = a.roll() - b.roll();
  return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Trajectory order_heuristic(const Trajectory& traj) {
  const int n = traj.size();
  int extreme = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) total += angle_distance(traj[i], traj[j]);
    if (total > best && !nearly_equal(total, best)) {
      best = total;
      extreme = i;
    }
  }
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) dist[i] = angle_distance(traj[extreme], traj[i]);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist[a] < dist[b]; });
  return traj.permuted(order);
}

std::vector<Point2> emd_grid(int width, int height, int per_axis) {
  if (width <= 0 || height <= 0 || per_axis < 1) {
    throw InvalidArgument("emd_grid needs positive dimensions and cell count");
  }
  std::vector<Point2> grid;
  grid.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  const double sx = static_cast<double>(width) / per_axis;
  const double sy = static_cast<double>(height) / per_axis;
  for (int j = 0; j < per_axis; ++j) {
    for (int i = 0; i < per_axis; ++i) {
      grid.push_back({(i + 0.5) * sx - 0.5, (j + 0.5) * sy - 0.5});
    }
  }
  return grid;
}

Eigen::MatrixXd emd_cost_matrix(const Trajectory& a, const Trajectory& b,
                                const CameraIntrinsics& k,
                                std::span<const Point2> grid) {
  if (a.size() != b.size()) {
    throw InvalidArgument("EMD needs trajectories of equal length (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  if (grid.empty()) throw InvalidArgument("EMD grid is empty");
  const int n = a.size();
  const auto warp_all = [&](const Trajectory& traj) {
    std::vector<std::vector<Point2>> out(n);
    for (int t = 0; t < n; ++t) {
      const Homography h = homography_from_pose(traj[t], k);
      out[t].reserve(grid.size());
      for (const Point2& g : grid) out[t].push_back(h.apply(g));
    }
    return out;
  };
  const auto ga = warp_all(a);
  const auto gb = warp_all(b);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double dx = ga[i][g].x - gb[j][g].x;
        const double dy = ga[i][g].y - gb[j][g].y;
        s += dx * dx + dy * dy;
      }
      m(i, j) = s / static_cast<double>(grid.size());
    }
  }
  return m;
}

double emd_distance(const Trajectory& a, const Trajectory& b,
                    const CameraIntrinsics& k, std::span<const Point2> grid) {
  return min_cost_assignment(emd_cost_matrix(a, b, k, grid)).cost;
}

Trajectory remove_mean(const Trajectory& traj) {
  std::array<double, 3> mean{};
  for (const auto& p : traj) {
    for (int a = 0; a < 3; ++a) mean[a] += p[a] / traj.size();
  }
  std::vector<PoseAngles> out;
  out.reserve(traj.size());
  auto lim = [](double v) {
    return std::clamp(v, -PoseAngles::kMaxAngle, PoseAngles::kMaxAngle);
  };
  for (const auto& p : traj) {
    out.emplace_back(lim(p[0] - mean[0]), lim(p[1] - mean[1]), lim(p[2] - mean[2]));
  }
  return Trajectory(std::move(out));
}

}  // namespace pmbm
