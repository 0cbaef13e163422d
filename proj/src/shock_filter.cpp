#include <algorithm>
#include <cmath>
#include <vector>

#include "pmbm/error.hpp"
#include "pmbm/restoration.hpp"

namespace pmbm {
namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

std::vector<double> gaussian_taps(double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> g(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    g[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += g[i + r];
  }
  for (double& v : g) v /= sum;
  return g;
}

}  // namespace

ImageF shock_filter(const ImageF& x, int iters, double dt, double sigma) {
  if (iters < 0) throw InvalidArgument("shock filter: iterations must be >= 0");
  if (!(dt > 0.0) || dt > 0.5) throw InvalidArgument("shock filter: dt must be in (0, 0.5]");
  if (!(sigma > 0.0)) throw InvalidArgument("shock filter: sigma must be > 0");
  const int w = x.width(), h = x.height(), ch = x.channels();
  const auto g = gaussian_taps(sigma);
  const int r = static_cast<int>(g.size()) / 2;
  ImageF u = x;
  ImageF tmp(w, h, ch), smooth(w, h, ch), next(w, h, ch);
  auto cx = [w](int v) { return std::clamp(v, 0, w - 1); };
  auto cy = [h](int v) { return std::clamp(v, 0, h - 1); };
  for (int it = 0; it < iters; ++it) {
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx)
        for (int c = 0; c < ch; ++c) {
          double a = 0.0;
          for (int q = -r; q <= r; ++q) a += g[q + r] * u.at(cx(xx + q), y, c);
          tmp.at(xx, y, c) = a;
        }
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx)
        for (int c = 0; c < ch; ++c) {
          double a = 0.0;
          for (int q = -r; q <= r; ++q) a += g[q + r] * tmp.at(xx, cy(y + q), c);
          smooth.at(xx, y, c) = a;
        }
    for (int y = 0; y < h; ++y) {
      for (int xx = 0; xx < w; ++xx) {
        for (int c = 0; c < ch; ++c) {
          const double s = smooth.at(xx, y, c);
          const double lap = smooth.at(cx(xx + 1), y, c) + smooth.at(cx(xx - 1), y, c) +
                             smooth.at(xx, cy(y + 1), c) + smooth.at(xx, cy(y - 1), c) - 4.0 * s;
          const double v = u.at(xx, y, c);
          const double gx = minmod(u.at(cx(xx + 1), y, c) - v, v - u.at(cx(xx - 1), y, c));
          const double gy = minmod(u.at(xx, cy(y + 1), c) - v, v - u.at(xx, cy(y - 1), c));
          const double sign = lap > 0.0 ? 1.0 : (lap < 0.0 ? -1.0 : 0.0);
          next.at(xx, y, c) = v - dt * sign * std::sqrt(gx * gx + gy * gy);
        }
      }
    }
    std::swap(u, next);
  }
  return u;
}

}  // namespace pmbm
