#include <cmath>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "pmbm/error.hpp"
#include "pmbm/image.hpp"
#include "pmbm/png_io.hpp"
#include "test_util.hpp"

using namespace pmbm;
using namespace pmbm::testing;

TEST(ImageF, ShapeAndFinitenessChecked) {
  ImageF a(4, 3, 3, 0.25);
  EXPECT_EQ(a.size(), 36u);
  EXPECT_THROW(ImageF(2, 2, 1, std::vector<double>(3, 0.0)), InvalidArgument);
  std::vector<double> bad(4, 0.0);
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ImageF(2, 2, 1, bad), InvalidArgument);
  EXPECT_THROW(ImageF(2, 2, 2, 0.0), InvalidArgument);
}

TEST(SampleBilinear, GridNodesAreExact) {
  Gen g(1);
  ImageF img = g.image(7, 9, 3);
  auto s = sample_bilinear(img, 3, 5);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(s[c], img.at(3, 5, c));
}

TEST(SampleBilinear, Midpoints) {
  ImageF line(2, 1, 1, std::vector<double>{0.0, 1.0});
  EXPECT_DOUBLE_EQ(sample_bilinear(line, 0.5, 0)[0], 0.5);
  ImageF sq(2, 2, 1, std::vector<double>{0.0, 1.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(sample_bilinear(sq, 0.5, 0.5)[0], 0.5);
  // hand evaluation at (0.25, 0.75): weights (.75*.25, .25*.25, .75*.75, .25*.75)
  EXPECT_NEAR(sample_bilinear(sq, 0.25, 0.75)[0], 0.0625 + 0.5625, 1e-15);
}

TEST(SampleBilinear, BoundaryPolicies) {
  ImageF img(3, 3, 1, 0.8);
  EXPECT_DOUBLE_EQ(sample_bilinear(img, -0.5, 1, BoundaryPolicy::Clamp)[0], 0.8);
  EXPECT_DOUBLE_EQ(sample_bilinear(img, -0.5, 1, BoundaryPolicy::Zero)[0], 0.4);
  EXPECT_DOUBLE_EQ(sample_bilinear(img, -5, -5, BoundaryPolicy::Zero)[0], 0.0);
  EXPECT_DOUBLE_EQ(sample_bilinear(img, 40, 2, BoundaryPolicy::Clamp)[0], 0.8);
}

TEST(SampleBilinear, NonFiniteCoordinateRejected) {
  ImageF img(3, 3, 1, 0.5);
  EXPECT_THROW(sample_bilinear(img, std::nan(""), 1), InvalidArgument);
  EXPECT_THROW(sample_bilinear(img, 1, INFINITY), InvalidArgument);
  EXPECT_THROW(sample_bilinear(ImageF(), 0, 0), InvalidArgument);
}

TEST(SampleBilinearProperty, LinearInTheImage) {
  Gen g(2);
  for (int trial = 0; trial < 50; ++trial) {
    int w = g.integer(2, 12), h = g.integer(2, 12);
    ImageF u = g.image(w, h), v = g.image(w, h);
    double al = g.uniform(-2, 2), be = g.uniform(-2, 2);
    ImageF mix = al * u + be * v;
    for (int k = 0; k < 20; ++k) {
      double x = g.uniform(-2, w + 1), y = g.uniform(-2, h + 1);
      for (auto pol : {BoundaryPolicy::Clamp, BoundaryPolicy::Zero}) {
        double lhs = sample_bilinear(mix, x, y, pol)[0];
        double rhs = al * sample_bilinear(u, x, y, pol)[0] +
                     be * sample_bilinear(v, x, y, pol)[0];
        ASSERT_NEAR(lhs, rhs, 1e-6);
      }
    }
  }
}

TEST(SampleBilinearProperty, ClampStaysInRange) {
  Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    ImageF u = g.image(g.integer(1, 10), g.integer(1, 10));
    double lo = u.min_value(), hi = u.max_value();
    for (int k = 0; k < 40; ++k) {
      double s = sample_bilinear(u, g.uniform(-5, 15), g.uniform(-5, 15))[0];
      ASSERT_GE(s, lo);
      ASSERT_LE(s, hi);
    }
  }
}

TEST(Png, ConstantRoundTrip) {
  TempDir dir("png_const");
  ImageF img(5, 4, 1, 0.5);
  save_png(img, dir / "half.png");
  ImageF back = load_png(dir / "half.png");
  ASSERT_TRUE(back.same_shape(img));
  for (double s : back.samples()) EXPECT_LE(std::abs(s - 0.5), 1.0 / 255);
}

TEST(Png, RandomRoundTripWithinHalfQuantum) {
  TempDir dir("png_rand");
  Gen g(4);
  for (int c : {1, 3}) {
    ImageF img = g.image(17, 11, c);
    save_png(img, dir / "r.png");
    ImageF back = load_png(dir / "r.png");
    ASSERT_TRUE(back.same_shape(img));
    EXPECT_LE(max_abs_diff(img, back), 1.0 / 510 + 1e-12);
  }
}

TEST(Png, SaveClampsOutOfRange) {
  TempDir dir("png_clamp");
  ImageF img(2, 1, 1, std::vector<double>{-0.3, 1.7});
  save_png(img, dir / "c.png");
  ImageF back = load_png(dir / "c.png");
  EXPECT_EQ(back.at(0, 0), 0.0);
  EXPECT_EQ(back.at(1, 0), 1.0);
}

TEST(Png, TruncatedFileIsDecodeError) {
  TempDir dir("png_trunc");
  Gen g(5);
  save_png(g.image(32, 32, 3), dir / "full.png");
  std::ifstream in(dir / "full.png", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  std::ofstream(dir / "cut.png", std::ios::binary).write(bytes.data(), bytes.size() / 2);
  EXPECT_THROW(load_png(dir / "cut.png"), DecodeError);
}

TEST(Png, MissingFileIsIoError) {
  EXPECT_THROW(load_png("/nonexistent/dir/x.png"), IoError);
  EXPECT_THROW(save_png(ImageF(2, 2, 1), "/nonexistent/dir/x.png"), IoError);
}
