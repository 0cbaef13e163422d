#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "pmbm/assignment.hpp"
#include "pmbm/error.hpp"
#include "pmbm/serialization.hpp"
#include "pmbm/trajectory.hpp"
#include "test_util.hpp"

using namespace pmbm;
using namespace pmbm::testing;

namespace {

// Exhaustive oracle: minimum total cost over all T! matchings.
double brute_force_emd(const Eigen::MatrixXd& m) {
  std::vector<int> p(m.rows());
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) c += m(i, p[i]);
    best = std::min(best, c);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

double summed_distance(const Trajectory& t, int i) {
  double s = 0.0;
  for (int j = 0; j < t.size(); ++j) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) d2 += std::pow(t[i][a] - t[j][a], 2);
    s += std::sqrt(d2);
  }
  return s;
}

Trajectory pitches(std::initializer_list<double> deg) {
  std::vector<PoseAngles> p;
  for (double d : deg) p.emplace_back(d * kDeg, 0, 0);
  return Trajectory(p);
}

}  // namespace

TEST(Trajectory, Construction) {
  EXPECT_THROW(Trajectory(std::vector<PoseAngles>{}), InvalidArgument);
  EXPECT_EQ(Trajectory::zeros(4).size(), 4);
  EXPECT_EQ(Trajectory::zeros(3).max_abs_angle(), 0.0);
  Trajectory t = pitches({1, -3, 2});
  EXPECT_DOUBLE_EQ(t.max_abs_angle(), 3 * kDeg);
  std::vector<int> order{2, 0, 1};
  Trajectory p = t.permuted(order);
  EXPECT_EQ(p[0], t[2]);
  EXPECT_EQ(p[2], t[1]);
}

TEST(FromPixelParams, Examples) {
  std::vector<PixelParam> zero(3, PixelParam{0, 0, 0, 500});
  EXPECT_EQ(from_pixel_params(zero), Trajectory::zeros(3));

  std::vector<PixelParam> diag{{700, 0, 0, 700}};
  EXPECT_DOUBLE_EQ(from_pixel_params(diag)[0].pitch(), std::atan(1.0));

  std::vector<PixelParam> one{{10, -5, 0.003, 1000}};
  PoseAngles p = from_pixel_params(one)[0];
  EXPECT_DOUBLE_EQ(p.pitch(), std::atan(0.01));
  EXPECT_DOUBLE_EQ(p.yaw(), std::atan(-0.005));
  EXPECT_DOUBLE_EQ(p.roll(), 0.003);

  std::vector<PixelParam> bad{{1, 1, 0, 0}};
  EXPECT_THROW(from_pixel_params(bad), InvalidArgument);
  std::vector<PixelParam> mixed{{1, 1, 0, 500}, {1, 1, 0, 600}};
  EXPECT_THROW(from_pixel_params(mixed), InvalidArgument);
}

TEST(Tremor, DeterministicPerSeed) {
  TremorConfig c;
  c.seed = 42;
  EXPECT_EQ(generate_tremor(c), generate_tremor(c));
  TremorConfig d = c;
  d.seed = 43;
  EXPECT_NE(generate_tremor(c), generate_tremor(d));
}

TEST(Tremor, CenteredAndPeakAmplitude) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (bool centered : {true, false}) {
      TremorConfig c;
      c.seed = seed;
      c.timesteps = 9 + static_cast<int>(seed);
      c.amplitude_deg = 1.0;
      c.centered = centered;
      Trajectory t = generate_tremor(c);
      ASSERT_EQ(t.size(), c.timesteps);
      for (int a = 0; a < 3; ++a) {
        double mean = 0.0, peak = 0.0;
        for (const auto& p : t) {
          mean += p[a] / t.size();
          peak = std::max(peak, std::abs(p[a]));
        }
        if (centered) {
          ASSERT_NEAR(mean, 0.0, 1e-12);
        }
        ASSERT_NEAR(peak, kDeg, 1e-9);
      }
    }
  }
}

TEST(Tremor, ConfigValidation) {
  TremorConfig c;
  c.timesteps = 1;
  EXPECT_THROW(generate_tremor(c), InvalidArgument);
  c = {};
  c.amplitude_deg = 0;
  EXPECT_THROW(generate_tremor(c), InvalidArgument);
  c = {};
  c.band_lo_hz = 12;
  c.band_hi_hz = 6;
  EXPECT_THROW(generate_tremor(c), InvalidArgument);
  c = {};
  c.exposure_s = -1;
  EXPECT_THROW(generate_tremor(c), InvalidArgument);
}

TEST(OrderHeuristic, Examples) {
  Trajectory single = pitches({0.5});
  EXPECT_EQ(order_heuristic(single), single);

  // Summed distances: 1deg -> 2, 0 -> 3, 2deg -> 3. The tie between the
  // endpoints goes to the lower index (0 at index 1).
  Trajectory t = pitches({1, 0, 2});
  EXPECT_DOUBLE_EQ(summed_distance(t, 1), summed_distance(t, 2));
  EXPECT_EQ(order_heuristic(t), pitches({0, 1, 2}));
}

TEST(OrderHeuristic, MonotoneGivesInputOrReversal) {
  Gen g(20);
  for (int trial = 0; trial < 200; ++trial) {
    int n = g.integer(1, 6);
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(g.uniform(-0.02, 0.02));
    std::sort(v.begin(), v.end());
    std::vector<PoseAngles> p;
    double dir = g.uniform(0, 1);
    for (double a : v) p.emplace_back(a, a * dir, -0.5 * a);
    Trajectory t(p);
    std::vector<PoseAngles> rev(p.rbegin(), p.rend());
    Trajectory o = order_heuristic(t);
    ASSERT_TRUE(o == t || o == Trajectory(rev));
  }
}

TEST(OrderHeuristicProperty, PermutationAndIdempotent) {
  Gen g(21);
  for (int trial = 0; trial < 100; ++trial) {
    Trajectory t = g.trajectory(g.integer(1, 12), 0.03);
    Trajectory o = order_heuristic(t);
    ASSERT_EQ(order_heuristic(o), o);
    auto key = [](const PoseAngles& p) { return p.as_array(); };
    std::vector<std::array<double, 3>> a, b;
    for (auto& p : t) a.push_back(key(p));
    for (auto& p : o) b.push_back(key(p));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ASSERT_EQ(a, b);
    // The first pose maximizes the summed distance.
    double best = 0.0;
    for (int i = 0; i < t.size(); ++i) best = std::max(best, summed_distance(t, i));
    ASSERT_NEAR(summed_distance(o, 0), best, 1e-12 * (1 + best));
  }
}

TEST(Assignment, MatchesBruteForce) {
  Gen g(22);
  for (int trial = 0; trial < 200; ++trial) {
    int n = g.integer(1, 6);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g.integer(0, 3) == 0 ? 1.0 : g.uniform(0, 10);
    Assignment a = min_cost_assignment(m);
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += m(i, a.column_of_row[i]);
    ASSERT_DOUBLE_EQ(a.cost, c);
    ASSERT_NEAR(a.cost, brute_force_emd(m), 1e-12);
  }
}

TEST(Emd, GridLayout) {
  auto grid = emd_grid(100, 50);
  ASSERT_EQ(grid.size(), 25u);
  EXPECT_DOUBLE_EQ(grid.front().x, 10.0 - 0.5);
  EXPECT_DOUBLE_EQ(grid.front().y, 5.0 - 0.5);
  EXPECT_DOUBLE_EQ(grid.back().x, 90.0 - 0.5);
}

TEST(Emd, SelfAndPermutation) {
  Gen g(23);
  auto k = CameraIntrinsics::centered(500, 128, 96);
  auto grid = emd_grid(128, 96);
  for (int trial = 0; trial < 100; ++trial) {
    Trajectory a = g.trajectory(g.integer(1, 9), 0.02);
    EXPECT_EQ(emd_distance(a, a, k, grid), 0.0);
    auto perm = g.permutation(a.size());
    ASSERT_EQ(emd_distance(a, a.permuted(perm), k, grid), 0.0);
  }
  EXPECT_THROW(emd_distance(Trajectory::zeros(2), Trajectory::zeros(3), k, grid),
               InvalidArgument);
  EXPECT_THROW(emd_distance(Trajectory::zeros(2), Trajectory::zeros(2), k, {}),
               InvalidArgument);
}

TEST(Emd, ExhaustiveOracleSmallT) {
  Gen g(24);
  auto k = CameraIntrinsics::centered(300, 64, 64);
  auto grid = emd_grid(64, 64);
  for (int trial = 0; trial < 60; ++trial) {
    int t = g.integer(1, 5);
    Trajectory a = g.trajectory(t, 0.02), b = g.trajectory(t, 0.02);
    Eigen::MatrixXd m = emd_cost_matrix(a, b, k, grid);
    // cost entry recomputed from its definition
    Homography ha = homography_from_pose(a[0], k), hb = homography_from_pose(b[0], k);
    double m00 = 0.0;
    for (auto& p : grid) {
      Point2 qa = ha.apply(p), qb = hb.apply(p);
      m00 += ((qa.x - qb.x) * (qa.x - qb.x) + (qa.y - qb.y) * (qa.y - qb.y)) / grid.size();
    }
    ASSERT_NEAR(m(0, 0), m00, 1e-12 * (1 + m00));
    ASSERT_EQ(emd_distance(a, b, k, grid), brute_force_emd(m));
  }
}

TEST(EmdProperty, Symmetric) {
  Gen g(25);
  auto k = CameraIntrinsics::centered(400, 80, 60);
  auto grid = emd_grid(80, 60);
  for (int trial = 0; trial < 50; ++trial) {
    int t = g.integer(1, 12);
    Trajectory a = g.trajectory(t, 0.03), b = g.trajectory(t, 0.03);
    ASSERT_NEAR(emd_distance(a, b, k, grid), emd_distance(b, a, k, grid), 1e-9);
  }
}

TEST(EmdProperty, GrowsWithRollShift) {
  Gen g(26);
  auto k = CameraIntrinsics::centered(500, 128, 128);
  auto grid = emd_grid(128, 128);
  Trajectory a = g.trajectory(9, 0.01);
  double prev = 0.0;
  for (double eps : {0.001, 0.002, 0.005}) {
    std::vector<PoseAngles> p;
    for (auto& q : a) p.emplace_back(q.pitch(), q.yaw(), q.roll() + eps);
    double d = emd_distance(a, Trajectory(p), k, grid);
    EXPECT_GT(d, prev);
    prev = d;
  }
}

TEST(RemoveMean, ZeroMeanPerAxis) {
  Gen g(27);
  Trajectory t = remove_mean(g.trajectory(7, 0.02));
  for (int a = 0; a < 3; ++a) {
    double m = 0.0;
    for (auto& p : t) m += p[a];
    EXPECT_NEAR(m, 0.0, 1e-15);
  }
}

TEST(TrajectoryJson, RoundTripIsBitwise) {
  TempDir dir("traj");
  Gen g(28);
  for (int trial = 0; trial < 10; ++trial) {
    Trajectory t = g.trajectory(g.integer(1, 30), 0.5);
    double f = g.uniform(100, 2000);
    save_traj(t, f, dir / "t.json");
    TrajectoryFile back = load_traj(dir / "t.json");
    ASSERT_EQ(back.trajectory, t);
    ASSERT_EQ(back.focal_px, f);
  }
}

TEST(TrajectoryJson, Errors) {
  using nlohmann::json;
  json ok = trajectory_to_json(Trajectory::zeros(2), 500);
  EXPECT_EQ(ok["T"], 2);
  json no_angles = ok;
  no_angles.erase("angles_rad");
  EXPECT_THROW(trajectory_from_json(no_angles), ParseError);
  json empty = ok;
  empty["angles_rad"] = json::array();
  empty["T"] = 0;
  EXPECT_THROW(trajectory_from_json(empty), InvalidArgument);
  json mismatch = ok;
  mismatch["T"] = 3;
  EXPECT_THROW(trajectory_from_json(mismatch), InvalidArgument);
  json wide = ok;
  wide["angles_rad"][0] = json::array({0.0, 0.0, 1.2});
  EXPECT_THROW(trajectory_from_json(wide), DomainError);

  TempDir dir("traj_err");
  std::ofstream(dir / "bad.json") << "{\"T\": 1, ";
  EXPECT_THROW(load_traj(dir / "bad.json"), ParseError);
  EXPECT_THROW(load_traj(dir / "missing.json"), IoError);
}
