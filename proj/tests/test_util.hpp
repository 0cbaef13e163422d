#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "pmbm/geometry.hpp"
#include "pmbm/image.hpp"
#include "pmbm/trajectory.hpp"

namespace pmbm::testing {

inline constexpr double kDeg = 3.14159265358979323846 / 180.0;

// Hand-rolled generators: everything goes through one mt19937_64 so a failing
// case can be replayed from its seed.
struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }

  ImageF image(int w, int h, int c = 1) {
    std::vector<double> d(static_cast<std::size_t>(w) * h * c);
    for (auto& x : d) x = uniform(0.0, 1.0);
    return ImageF(w, h, c, std::move(d));
  }

  PoseAngles pose(double max_abs) {
    return {uniform(-max_abs, max_abs), uniform(-max_abs, max_abs),
            uniform(-max_abs, max_abs)};
  }

  Trajectory trajectory(int t, double max_abs) {
    std::vector<PoseAngles> p;
    for (int i = 0; i < t; ++i) p.push_back(pose(max_abs));
    return Trajectory(std::move(p));
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  }

  std::mt19937_64 rng;
};

// Single-axis sweep from -amp to +amp.
inline Trajectory axis_sweep(int axis, double amp, int t) {
  std::vector<PoseAngles> p;
  for (int i = 0; i < t; ++i) {
    double a = -amp + 2.0 * amp * i / (t - 1);
    std::array<double, 3> v{0.0, 0.0, 0.0};
    v[axis] = a;
    p.emplace_back(v[0], v[1], v[2]);
  }
  return Trajectory(std::move(p));
}

inline double max_abs_diff(const ImageF& a, const ImageF& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double rel_l2(const ImageF& a, const ImageF& ref) {
  return std::sqrt(squared_norm(a - ref) / squared_norm(ref));
}

// Scratch directory unique to one test, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("pmbm_test_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace pmbm::testing
