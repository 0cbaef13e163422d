#pragma once

#include <vector>

#include "json.hpp"
#include "pmbm/blur_operator.hpp"
#include "pmbm/image.hpp"

namespace pmbm {

/// Per-iteration coefficients of the linearized ADMM loop.
struct AdmmConfig {
  int iterations = 8;
  std::vector<double> a;  // data-step weight
  std::vector<double> b;  // denoiser strength
  std::vector<double> c;  // gradient step
  int tv_iters = 20;
  bool clip_output = true;

  /// a = 0.5, c = 1, b decaying geometrically from 0.05 to 0.005.
  static AdmmConfig defaults(int iterations = 8);

  /// Throws InvalidArgument unless K >= 1, every schedule has K strictly
  /// positive finite entries and tv_iters >= 0.
  void validate() const;
};

/// {"iters": K, "a": [...], "b": [...], "c": [...], "tv_iters": n, "clip": bool}.
/// Missing schedules fall back to the defaults for that K.
nlohmann::json admm_config_to_json(const AdmmConfig& cfg);
AdmmConfig admm_config_from_json(const nlohmann::json& j);

struct AdmmResult {
  ImageF u;
  /// ||B u_k - v|| for k = 0..K.
  std::vector<double> residuals;
};

/// Restores v under op: u_0 = z_0 = v, beta_0 = 0 and K rounds of
///   u <- D_b(u - c B^T(B u - z + beta))
///   z <- (v + a (B u + beta)) / (a + 1)
///   beta <- beta + B u - z
/// with D_b the TV denoiser. Throws DivergenceError on non-finite iterates.
AdmmResult admm_deblur_traced(const ImageF& v, const BlurOperator& op,
                              const AdmmConfig& cfg);
ImageF admm_deblur(const ImageF& v, const BlurOperator& op, const AdmmConfig& cfg);

/// Closed-form minimizer of 1/2||z - v||^2 + a/2 ||z - target||^2.
ImageF admm_data_step(const ImageF& v, const ImageF& target, double a);

/// Approximate ROF solution argmin_y 1/2||y - x||^2 + b TV(y), per channel,
/// by Chambolle's dual projection. Iterates that would raise the energy are
/// not accepted, so the returned energy trace never increases.
ImageF tv_denoise(const ImageF& x, double b, int inner_iters,
                  std::vector<double>* energies = nullptr);

/// Isotropic TV with forward differences and a replicated border.
double total_variation(const ImageF& y);
double rof_energy(const ImageF& y, const ImageF& x, double b);

/// Osher-Rudin shock filter, per channel: u <- u - dt sign(lap(G_sigma * u)) |grad u|
/// with minmod gradients and a replicated border. Steepens smooth edges into
/// steps without creating new extrema.
ImageF shock_filter(const ImageF& x, int iters, double dt = 0.2, double sigma = 1.0);

/// Multiplicative updates u <- u * B^T(v / (B u + 1e-8)) from u_0 = v.
ImageF richardson_lucy_pmbm(const ImageF& v, const BlurOperator& op, int iters);

}  // namespace pmbm
