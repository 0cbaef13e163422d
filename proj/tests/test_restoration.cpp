#include <cmath>

#include <gtest/gtest.h>

#include "pmbm/error.hpp"
#include "pmbm/evaluation.hpp"
#include "pmbm/restoration.hpp"
#include "test_util.hpp"

using namespace pmbm;
using namespace pmbm::testing;

namespace {

PairSample tremor_pair(int size, int t, double amp_deg, std::uint64_t seed, double focal) {
  TremorConfig tc;
  tc.timesteps = t;
  tc.amplitude_deg = amp_deg;
  tc.seed = seed;
  ImageF u = synthetic_scene(size, size, 1, 1000 + seed);
  return synth_pair(u, generate_tremor(tc), CameraIntrinsics::centered(focal, size, size));
}

double flat_variance(const ImageF& img, int x0, int x1) {
  double m = 0.0, s = 0.0;
  int n = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = x0; x < x1; ++x) m += img.at(x, y), ++n;
  m /= n;
  for (int y = 0; y < img.height(); ++y)
    for (int x = x0; x < x1; ++x) s += std::pow(img.at(x, y) - m, 2);
  return s / n;
}

}  // namespace

TEST(AdmmConfig, DefaultsAndValidation) {
  AdmmConfig c = AdmmConfig::defaults();
  EXPECT_EQ(c.iterations, 8);
  ASSERT_EQ(c.b.size(), 8u);
  EXPECT_DOUBLE_EQ(c.a[3], 0.5);
  EXPECT_DOUBLE_EQ(c.c[7], 1.0);
  EXPECT_NEAR(c.b.front(), 0.05, 1e-15);
  EXPECT_NEAR(c.b.back(), 0.005, 1e-15);
  EXPECT_NO_THROW(c.validate());

  AdmmConfig z = c;
  std::fill(z.a.begin(), z.a.end(), 0.0);
  std::fill(z.b.begin(), z.b.end(), 0.0);
  std::fill(z.c.begin(), z.c.end(), 0.0);
  EXPECT_THROW(z.validate(), InvalidArgument);
  AdmmConfig s = c;
  s.b.pop_back();
  EXPECT_THROW(s.validate(), InvalidArgument);
  AdmmConfig k = c;
  k.iterations = 0;
  EXPECT_THROW(k.validate(), InvalidArgument);
}

TEST(AdmmConfig, JsonRoundTripAndErrors) {
  AdmmConfig c = AdmmConfig::defaults(5);
  c.tv_iters = 7;
  c.clip_output = false;
  AdmmConfig b = admm_config_from_json(admm_config_to_json(c));
  EXPECT_EQ(b.iterations, 5);
  EXPECT_EQ(b.a, c.a);
  EXPECT_EQ(b.b, c.b);
  EXPECT_EQ(b.tv_iters, 7);
  EXPECT_FALSE(b.clip_output);

  AdmmConfig partial = admm_config_from_json(nlohmann::json{{"iters", 4}, {"a", 0.25}});
  EXPECT_EQ(partial.a, std::vector<double>(4, 0.25));
  EXPECT_EQ(partial.b, AdmmConfig::defaults(4).b);

  EXPECT_THROW(admm_config_from_json(nlohmann::json{{"iters", "x"}}), ParseError);
  EXPECT_THROW(admm_config_from_json(nlohmann::json{{"iters", 3}, {"a", {1.0, 2.0}}}),
               InvalidArgument);
  EXPECT_THROW(admm_config_from_json(nlohmann::json::array()), ParseError);
}

TEST(Admm, IdentityOperatorHighFidelity) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    ImageF v = synthetic_scene(96, 96, 1, 40 + seed);
    BlurOperator id(Trajectory::zeros(1), CameraIntrinsics::centered(96, 96, 96), 96, 96);
    EXPECT_GE(psnr(admm_deblur(v, id, AdmmConfig::defaults()), v), 40.0);
  }
}

TEST(Admm, ImprovesTremorPairAndResidualShrinks) {
  PairSample p = tremor_pair(128, 25, 1.0, 7, 128);
  BlurOperator op(p.trajectory, CameraIntrinsics::centered(p.focal, 128, 128), 128, 128);
  AdmmResult r = admm_deblur_traced(p.blurry, op, AdmmConfig::defaults());
  ASSERT_EQ(r.residuals.size(), 9u);
  EXPECT_LE(r.residuals.back(), r.residuals.front());
  EXPECT_GE(psnr(r.u, p.sharp) - psnr(p.blurry, p.sharp), 2.0);
}

TEST(Admm, DivergenceReportsIteration) {
  PairSample p = tremor_pair(32, 4, 1.0, 1, 32);
  BlurOperator op(p.trajectory, CameraIntrinsics::centered(32, 32, 32), 32, 32);
  AdmmConfig c = AdmmConfig::defaults(6);
  std::fill(c.c.begin(), c.c.end(), 1e300);
  c.clip_output = false;
  try {
    admm_deblur(p.blurry, op, c);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GE(e.iteration(), 0);
    EXPECT_LT(e.iteration(), 6);
  }
}

TEST(Admm, ShapeMismatchRejected) {
  BlurOperator op(Trajectory::zeros(1), CameraIntrinsics::centered(10, 8, 8), 8, 8);
  EXPECT_THROW(admm_deblur(ImageF(9, 8, 1), op, AdmmConfig::defaults()), InvalidArgument);
}

TEST(AdmmDataStep, MinimizesItsObjective) {
  Gen g(60);
  for (int trial = 0; trial < 10; ++trial) {
    ImageF v = g.image(6, 5), t = g.image(6, 5);
    double a = g.uniform(0.05, 4);
    ImageF z = admm_data_step(v, t, a);
    auto obj = [&](const ImageF& c) {
      return 0.5 * squared_norm(c - v) + 0.5 * a * squared_norm(c - t);
    };
    double best = obj(z);
    // the objective is quadratic, so at the minimizer the increase is exactly (1+a)/2 |d|^2
    for (int k = 0; k < 100; ++k) {
      ImageF noise = g.image(6, 5);
      double scale = std::pow(10.0, -g.uniform(1, 4));
      ImageF d = scale * (noise - ImageF(6, 5, 1, 0.5));
      double rise = obj(z + d) - best, want = 0.5 * (1 + a) * squared_norm(d);
      ASSERT_NEAR(rise, want, 1e-6 * want + 1e-14);
    }
  }
}

TEST(TvDenoise, FixedPoints) {
  Gen g(61);
  ImageF x = g.image(20, 15, 3);
  EXPECT_EQ(max_abs_diff(tv_denoise(x, 0.0, 30), x), 0.0);
  ImageF c(20, 15, 1, 0.3);
  EXPECT_LT(max_abs_diff(tv_denoise(c, 0.5, 30), c), 1e-15);
  EXPECT_THROW(tv_denoise(x, -1.0, 3), InvalidArgument);
}

TEST(TvDenoise, EnergyNeverIncreases) {
  Gen g(62);
  for (int trial = 0; trial < 10; ++trial) {
    ImageF x = g.image(g.integer(4, 30), g.integer(4, 30));
    std::vector<double> e;
    double b = g.uniform(0.01, 0.5);
    ImageF y = tv_denoise(x, b, 40, &e);
    ASSERT_GE(e.size(), 2u);
    for (std::size_t i = 1; i < e.size(); ++i) ASSERT_LE(e[i], e[i - 1]);
    EXPECT_NEAR(e.front(), rof_energy(x, x, b), 1e-9);
    EXPECT_NEAR(e.back(), rof_energy(y, x, b), 1e-9);
    EXPECT_LT(e.back(), e.front());
  }
}

TEST(TvDenoise, StepEdgePreservedFlatNoiseReduced) {
  Gen g(63);
  const int w = 64, h = 32;
  ImageF x(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int xx = 0; xx < w; ++xx)
      x.at(xx, y) = (xx < w / 2 ? 0.2 : 0.8) + 0.05 * (g.uniform(0, 1) - 0.5) * 2;
  ImageF y = tv_denoise(x, 0.05, 100);
  EXPECT_LE(flat_variance(y, 2, 28), 0.5 * flat_variance(x, 2, 28));
  EXPECT_LE(flat_variance(y, 36, 62), 0.5 * flat_variance(x, 36, 62));
  double left = 0.0, right = 0.0;
  for (int yy = 0; yy < h; ++yy) left += y.at(w / 2 - 2, yy) / h, right += y.at(w / 2 + 1, yy) / h;
  EXPECT_GT(right - left, 0.5);
}

TEST(TotalVariation, HandValues) {
  ImageF x(2, 2, 1, std::vector<double>{0.0, 1.0, 0.0, 1.0});
  // two horizontal unit steps on the left column, zero at the border
  EXPECT_DOUBLE_EQ(total_variation(x), 2.0);
  EXPECT_DOUBLE_EQ(rof_energy(x, x, 0.5), 1.0);
}

TEST(RichardsonLucy, IdentityAndNonnegativity) {
  Gen g(64);
  ImageF v = g.image(16, 12);
  BlurOperator id(Trajectory::zeros(1), CameraIntrinsics::centered(10, 16, 12), 16, 12);
  EXPECT_LT(max_abs_diff(richardson_lucy_pmbm(v, id, 1), v), 1e-6);

  PairSample p = tremor_pair(48, 9, 1.0, 3, 48);
  BlurOperator op(p.trajectory, CameraIntrinsics::centered(48, 48, 48), 48, 48);
  ImageF r = richardson_lucy_pmbm(p.blurry, op, 10);
  EXPECT_GE(r.min_value(), 0.0);
  ImageF neg(4, 4, 1, -0.1);
  BlurOperator small(Trajectory::zeros(1), CameraIntrinsics::centered(10, 4, 4), 4, 4);
  EXPECT_THROW(richardson_lucy_pmbm(neg, small, 1), InvalidArgument);
}

TEST(RichardsonLucy, ImprovesAndPreservesFlux) {
  PairSample p = tremor_pair(128, 9, 1.0, 11, 128);
  BlurOperator op(p.trajectory, CameraIntrinsics::centered(128, 128, 128), 128, 128);
  ImageF r = richardson_lucy_pmbm(p.blurry, op, 30);
  EXPECT_GT(psnr(r, p.sharp), psnr(p.blurry, p.sharp));
  EXPECT_NEAR(sum(r) / sum(p.blurry), 1.0, 0.02);
}

TEST(ShockFilter, SteepensWithoutNewExtrema) {
  const int w = 40, h = 8;
  ImageF ramp(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) ramp.at(x, y) = 0.2 + 0.6 / (1 + std::exp(-(x - 19.5) / 3.0));
  ImageF s = shock_filter(ramp, 20);
  EXPECT_GE(s.min_value(), ramp.min_value() - 1e-12);
  EXPECT_LE(s.max_value(), ramp.max_value() + 1e-12);
  auto slope = [&](const ImageF& img) { return img.at(20, 4) - img.at(19, 4); };
  EXPECT_GT(slope(s), slope(ramp));
  EXPECT_EQ(max_abs_diff(shock_filter(ramp, 0), ramp), 0.0);
}
