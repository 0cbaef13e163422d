#include "pmbm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pmbm/error.hpp"
#include "pmbm/parallel.hpp"
#include "pmbm/simd/kernels.hpp"

namespace pmbm {
namespace {

int mirror(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
  return i;
}

// Separable Gaussian filter of one channel with mirrored borders.
std::vector<double> gaussian_filter(const std::vector<double>& src, int w, int h,
                                    const std::vector<double>& g) {
  const int r = static_cast<int>(g.size()) / 2;
  std::vector<double> tmp(src.size()), out(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int q = -r; q <= r; ++q) s += g[q + r] * src[y * w + mirror(x + q, w)];
      tmp[y * w + x] = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int q = -r; q <= r; ++q) s += g[q + r] * tmp[mirror(y + q, h) * w + x];
      out[y * w + x] = s;
    }
  }
  return out;
}

}  // namespace

double psnr(const ImageF& a, const ImageF& b) {
  require_same_shape(a, b, "psnr");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImageF& a, const ImageF& b) {
  require_same_shape(a, b, "ssim");
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  std::vector<double> g(11);
  double gs = 0.0;
  for (int i = 0; i < 11; ++i) {
    g[i] = std::exp(-((i - 5) * (i - 5)) / (2.0 * 1.5 * 1.5));
    gs += g[i];
  }
  for (double& v : g) v /= gs;
  const int w = a.width(), h = a.height();
  const std::size_t n = a.pixel_count();
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = a.data()[i * a.channels() + c];
      y[i] = b.data()[i * b.channels() + c];
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto mx = gaussian_filter(x, w, h, g);
    const auto my = gaussian_filter(y, w, h, g);
    const auto sxx = gaussian_filter(xx, w, h, g);
    const auto syy = gaussian_filter(yy, w, h, g);
    const auto sxy = gaussian_filter(xy, w, h, g);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double vx = sxx[i] - mx[i] * mx[i];
      const double vy = syy[i] - my[i] * my[i];
      const double cxy = sxy[i] - mx[i] * my[i];
      acc += ((2 * mx[i] * my[i] + c1) * (2 * cxy + c2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    total += acc / static_cast<double>(n);
  }
  return total / a.channels();
}

PairSample synth_pair(const ImageF& u, const Trajectory& traj,
                      const CameraIntrinsics& k, double a_sat,
                      double noise_sigma, std::uint64_t seed) {
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidArgument("noise sigma must be finite and >= 0");
  }
  const BlurOperator op(traj, k, u.width(), u.height());
  ImageF blurry = saturate(blur_efficient(u, op), a_sat);
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (double& v : blurry.samples()) v += noise(rng);
  }
  return {u, clip(blurry), traj, k.focal, seed};
}

std::vector<ImageF> render_video(const ImageF& u_hat, const Trajectory& traj,
                                 const CameraIntrinsics& k, bool ordered) {
  const Trajectory poses = ordered ? order_heuristic(traj) : traj;
  const OffsetField field = offsets_from_trajectory(poses, k, u_hat.width(), u_hat.height());
  const auto isa = simd::active_isa();
  const auto view = simd::view_of(u_hat);
  const std::size_t row_len = static_cast<std::size_t>(u_hat.width()) * u_hat.channels();
  std::vector<ImageF> frames;
  for (int t = 0; t < poses.size(); ++t) {
    ImageF frame(u_hat.width(), u_hat.height(), u_hat.channels());
    const simd::OffsetTap tap{field.dx(t), field.dy(t), 0.0, 0.0, 1.0, 1.0};
    parallel_for_rows(u_hat.height(), [&](int y) {
      simd::accumulate_offset_row(isa, view, y, tap, BoundaryPolicy::Clamp,
                                  frame.data() + y * row_len);
    });
    frames.push_back(std::move(frame));
  }
  return frames;
}

ImageF mean_frame(const std::vector<ImageF>& frames) {
  if (frames.empty()) throw InvalidArgument("mean_frame of no frames");
  ImageF sum(frames[0].width(), frames[0].height(), frames[0].channels());
  for (const auto& f : frames) {
    require_same_shape(sum, f, "mean_frame");
    simd::axpby(1.0, f.data(), 1.0, sum.data(), sum.size());
  }
  for (double& v : sum.samples()) v /= static_cast<double>(frames.size());
  return sum;
}

ImageF synthetic_scene(int width, int height, int channels, std::uint64_t seed) {
  ImageF img(width, height, channels);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, 3> base{}, slope_x{}, slope_y{};
  for (int c = 0; c < channels; ++c) {
    base[c] = 0.3 + 0.4 * unit(rng);
    slope_x[c] = 0.2 * (unit(rng) - 0.5);
    slope_y[c] = 0.2 * (unit(rng) - 0.5);
  }
  const double scale = std::max(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        img.at(x, y, c) = base[c] + slope_x[c] * x / scale + slope_y[c] * y / scale;
      }
    }
  }
  // Radii follow p(r) ~ r^-3 between rmin and rmax, sampled by inversion.
  const double rmin = 2.0;
  const double rmax = std::max(8.0, 0.15 * std::min(width, height));
  const int discs = static_cast<int>(3.0 * width * height / (rmin * rmax * 3.14159));
  for (int d = 0; d < discs; ++d) {
    const double cx = unit(rng) * width;
    const double cy = unit(rng) * height;
    const double q = unit(rng);
    const double r = 1.0 / std::sqrt(1.0 / (rmin * rmin) -
                                     q * (1.0 / (rmin * rmin) - 1.0 / (rmax * rmax)));
    std::array<double, 3> tone{};
    const double gray = 0.1 + 0.8 * unit(rng);
    for (int c = 0; c < channels; ++c) tone[c] = std::clamp(gray + 0.15 * (unit(rng) - 0.5), 0.1, 0.9);
    const double gx = 0.1 * (unit(rng) - 0.5) / r;
    const double gy = 0.1 * (unit(rng) - 0.5) / r;
    const int x0 = std::max(0, static_cast<int>(cx - r));
    const int x1 = std::min(width - 1, static_cast<int>(cx + r) + 1);
    const int y0 = std::max(0, static_cast<int>(cy - r));
    const int y1 = std::min(height - 1, static_cast<int>(cy + r) + 1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double ddx = x - cx, ddy = y - cy;
        if (ddx * ddx + ddy * ddy > r * r) continue;
        for (int c = 0; c < channels; ++c) {
          img.at(x, y, c) = tone[c] + gx * ddx + gy * ddy;
        }
      }
    }
  }
  return clip(img, 0.05, 0.95);
}

ImageF gaussian_probe(int width, int height, int channels, double cx, double cy,
                      double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("probe sigma must be > 0");
  ImageF out(width, height, channels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      for (int c = 0; c < channels; ++c) out.at(x, y, c) = std::exp(-r2 / (2 * sigma * sigma));
    }
  }
  return out;
}

ImageF downsample2(const ImageF& img) {
  const int w = img.width() / 2, h = img.height() / 2;
  if (w < 1 || h < 1) throw InvalidArgument("image too small to downsample");
  ImageF out(w, h, img.channels());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        out.at(x, y, c) = 0.25 * (img.at(2 * x, 2 * y, c) + img.at(2 * x + 1, 2 * y, c) +
                                  img.at(2 * x, 2 * y + 1, c) + img.at(2 * x + 1, 2 * y + 1, c));
      }
    }
  }
  return out;
}

}  // namespace pmbm
