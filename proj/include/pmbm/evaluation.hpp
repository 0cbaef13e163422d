#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pmbm/blur_operator.hpp"
#include "pmbm/geometry.hpp"
#include "pmbm/image.hpp"
#include "pmbm/trajectory.hpp"

namespace pmbm {

inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10 log10(1/MSE) for samples in [0,1]; +inf for identical images.
double psnr(const ImageF& a, const ImageF& b);
/// Mean SSIM, 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2, C2 = 0.03^2,
/// mirrored borders, averaged over channels.
double ssim(const ImageF& a, const ImageF& b);

struct PairSample {
  ImageF sharp;
  ImageF blurry;
  Trajectory trajectory;
  double focal;
  std::uint64_t seed;
};

/// blurry = clip(R(B u) + noise), B with a centered principal point and
/// Clamp boundary, noise ~ N(0, sigma^2) from `seed`.
PairSample synth_pair(const ImageF& u, const Trajectory& traj,
                      const CameraIntrinsics& k, double a_sat = 50.0,
                      double noise_sigma = 0.0, std::uint64_t seed = 0);

/// Frame t samples u_hat through H_t^-1, the same reads blur_naive averages.
/// With `ordered`, the poses are first sorted by order_heuristic.
std::vector<ImageF> render_video(const ImageF& u_hat, const Trajectory& traj,
                                 const CameraIntrinsics& k, bool ordered);

/// Per-sample mean of equally shaped frames.
ImageF mean_frame(const std::vector<ImageF>& frames);

/// Seeded dead-leaves picture: overlapping discs with power-law radii and
/// shaded interiors over a smooth background; samples stay in [0.05, 0.95].
ImageF synthetic_scene(int width, int height, int channels, std::uint64_t seed);

/// exp(-|i - c|^2 / (2 sigma^2)) in every channel.
ImageF gaussian_probe(int width, int height, int channels, double cx, double cy,
                      double sigma);

/// 2x box downsampling (odd trailing rows/columns are dropped).
ImageF downsample2(const ImageF& img);

}  // namespace pmbm
