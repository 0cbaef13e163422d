#include <cmath>
#include <string>
#include <vector>

#include "pmbm/error.hpp"
#include "pmbm/restoration.hpp"

namespace pmbm {
namespace {

// Chambolle's step bound is 1/8; 1/4 converges in practice and the energy
// check below rejects any iterate that goes the wrong way.
constexpr double kDualStep = 0.25;

struct Plane {
  int w, h;
  std::vector<double> v;
  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

Plane channel_plane(const ImageF& img, int c) {
  Plane p{img.width(), img.height(), std::vector<double>(img.pixel_count())};
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    p.v[i] = img.data()[i * img.channels() + c];
  }
  return p;
}

double plane_tv(const Plane& y) {
  double tv = 0.0;
  for (int r = 0; r < y.h; ++r) {
    for (int x = 0; x < y.w; ++x) {
      const double gx = x + 1 < y.w ? y.at(x + 1, r) - y.at(x, r) : 0.0;
      const double gy = r + 1 < y.h ? y.at(x, r + 1) - y.at(x, r) : 0.0;
      tv += std::sqrt(gx * gx + gy * gy);
    }
  }
  return tv;
}

double plane_energy(const Plane& y, const Plane& f, double b) {
  double fit = 0.0;
  for (std::size_t i = 0; i < y.v.size(); ++i) {
    const double d = y.v[i] - f.v[i];
    fit += d * d;
  }
  return 0.5 * fit + b * plane_tv(y);
}

// Negative adjoint of the forward-difference gradient.
void divergence(const Plane& px, const Plane& py, Plane& out) {
  for (int r = 0; r < out.h; ++r) {
    for (int x = 0; x < out.w; ++x) {
      double d = 0.0;
      if (x + 1 < out.w) d += px.at(x, r);
      if (x > 0) d -= px.at(x - 1, r);
      if (r + 1 < out.h) d += py.at(x, r);
      if (r > 0) d -= py.at(x, r - 1);
      out.at(x, r) = d;
    }
  }
}

Plane denoise_plane(const Plane& f, double b, int iters, std::vector<double>& energy) {
  const std::size_t n = f.v.size();
  Plane px{f.w, f.h, std::vector<double>(n, 0.0)};
  Plane py = px;
  Plane div = px;
  Plane g = px;
  Plane y = f;
  Plane cand = f;
  double e = plane_energy(y, f, b);
  energy.assign(1, e);
  for (int it = 0; it < iters; ++it) {
    divergence(px, py, div);
    for (std::size_t i = 0; i < n; ++i) g.v[i] = div.v[i] - f.v[i] / b;
    for (int r = 0; r < f.h; ++r) {
      for (int x = 0; x < f.w; ++x) {
        const double gx = x + 1 < f.w ? g.at(x + 1, r) - g.at(x, r) : 0.0;
        const double gy = r + 1 < f.h ? g.at(x, r + 1) - g.at(x, r) : 0.0;
        const double denom = 1.0 + kDualStep * std::sqrt(gx * gx + gy * gy);
        px.at(x, r) = (px.at(x, r) + kDualStep * gx) / denom;
        py.at(x, r) = (py.at(x, r) + kDualStep * gy) / denom;
      }
    }
    divergence(px, py, div);
    for (std::size_t i = 0; i < n; ++i) cand.v[i] = f.v[i] - b * div.v[i];
    const double ce = plane_energy(cand, f, b);
    if (ce <= e) {
      std::swap(y.v, cand.v);
      e = ce;
    }
    energy.push_back(e);
  }
  return y;
}

}  // namespace

double total_variation(const ImageF& y) {
  double tv = 0.0;
  for (int c = 0; c < y.channels(); ++c) tv += plane_tv(channel_plane(y, c));
  return tv;
}

double rof_energy(const ImageF& y, const ImageF& x, double b) {
  require_same_shape(y, x, "rof_energy");
  const ImageF d = y - x;
  return 0.5 * squared_norm(d) + b * total_variation(y);
}

ImageF tv_denoise(const ImageF& x, double b, int inner_iters,
                  std::vector<double>* energies) {
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw InvalidArgument("tv strength must be finite and >= 0");
  }
  if (inner_iters < 0) throw InvalidArgument("tv inner iterations must be >= 0");
  if (b == 0.0 || inner_iters == 0) {
    if (energies) energies->assign(1, rof_energy(x, x, b));
    return x;
  }
  ImageF out(x.width(), x.height(), x.channels());
  std::vector<double> total(static_cast<std::size_t>(inner_iters) + 1, 0.0);
  for (int c = 0; c < x.channels(); ++c) {
    std::vector<double> e;
    const Plane y = denoise_plane(channel_plane(x, c), b, inner_iters, e);
    for (std::size_t i = 0; i < x.pixel_count(); ++i) {
      out.data()[i * x.channels() + c] = y.v[i];
    }
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += e[i];
  }
  if (energies) *energies = std::move(total);
  return out;
}

}  // namespace pmbm
