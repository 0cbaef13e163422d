#include "pmbm/restoration.hpp"

#include <cmath>
#include <string>

#include "pmbm/error.hpp"
#include "pmbm/simd/kernels.hpp"

namespace pmbm {
namespace {

void check_finite(const ImageF& img, const char* what, int iteration) {
  for (double v : img.samples()) {
    if (!std::isfinite(v)) {
      throw DivergenceError(std::string("admm: non-finite ") + what +
                                " at iteration " + std::to_string(iteration),
                            iteration);
    }
  }
}

std::vector<double> json_schedule(const nlohmann::json& j, const char* key,
                                  const std::vector<double>& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return std::vector<double>(fallback.size(), v.get<double>());
  if (!v.is_array()) throw ParseError(std::string("admm config: '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(std::string("admm config: '") + key + "' has a non-numeric entry");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

AdmmConfig AdmmConfig::defaults(int iterations) {
  if (iterations < 1) throw InvalidArgument("admm needs at least one iteration");
  AdmmConfig cfg;
  cfg.iterations = iterations;
  cfg.a.assign(iterations, 0.5);
  cfg.c.assign(iterations, 1.0);
  const double first = 0.05, last = 0.005;
  for (int k = 0; k < iterations; ++k) {
    const double t = iterations > 1 ? static_cast<double>(k) / (iterations - 1) : 0.0;
    cfg.b.push_back(first * std::pow(last / first, t));
  }
  return cfg;
}

void AdmmConfig::validate() const {
  if (iterations < 1) throw InvalidArgument("admm: iterations must be >= 1");
  if (tv_iters < 0) throw InvalidArgument("admm: tv_iters must be >= 0");
  const std::pair<const char*, const std::vector<double>*> schedules[] = {
      {"a", &a}, {"b", &b}, {"c", &c}};
  for (const auto& [name, s] : schedules) {
    if (static_cast<int>(s->size()) != iterations) {
      throw InvalidArgument(std::string("admm: schedule '") + name + "' has " +
                            std::to_string(s->size()) + " entries, expected " +
                            std::to_string(iterations));
    }
    for (double v : *s) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string("admm: schedule '") + name +
                              "' entries must be positive and finite");
      }
    }
  }
}

nlohmann::json admm_config_to_json(const AdmmConfig& cfg) {
  return {{"iters", cfg.iterations}, {"a", cfg.a},           {"b", cfg.b},
          {"c", cfg.c},              {"tv_iters", cfg.tv_iters}, {"clip", cfg.clip_output}};
}

AdmmConfig admm_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("admm config must be a JSON object");
  try {
    const int k = j.value("iters", 8);
    AdmmConfig cfg = AdmmConfig::defaults(k);
    cfg.a = json_schedule(j, "a", cfg.a);
    cfg.b = json_schedule(j, "b", cfg.b);
    cfg.c = json_schedule(j, "c", cfg.c);
    cfg.tv_iters = j.value("tv_iters", cfg.tv_iters);
    cfg.clip_output = j.value("clip", cfg.clip_output);
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("admm config: ") + e.what());
  }
}

ImageF admm_data_step(const ImageF& v, const ImageF& target, double a) {
  require_same_shape(v, target, "admm_data_step");
  ImageF z = v;
  simd::axpby(a, target.data(), 1.0, z.data(), z.size());
  for (double& s : z.samples()) s /= (a + 1.0);
  return z;
}

AdmmResult admm_deblur_traced(const ImageF& v, const BlurOperator& op,
                              const AdmmConfig& cfg) {
  cfg.validate();
  if (v.width() != op.width() || v.height() != op.height()) {
    throw InvalidArgument("admm: image does not match the operator");
  }
  v.require_finite("admm input");
  ImageF u = v;
  ImageF z = v;
  ImageF beta(v.width(), v.height(), v.channels());
  ImageF bu = op.apply(u);
  AdmmResult res;
  res.residuals.push_back(std::sqrt(squared_norm(bu - v)));
  for (int k = 0; k < cfg.iterations; ++k) {
    // P: linearized prior step
    ImageF r = bu - z + beta;
    ImageF step = op.apply_adjoint(r);
    ImageF pre = u;
    simd::axpby(-cfg.c[k], step.data(), 1.0, pre.data(), pre.size());
    u = tv_denoise(pre, cfg.b[k], cfg.tv_iters);
    check_finite(u, "estimate", k);
    bu = op.apply(u);
    // DT: data step
    z = admm_data_step(v, bu + beta, cfg.a[k]);
    // U: dual update
    beta = beta + bu - z;
    check_finite(beta, "dual variable", k);
    res.residuals.push_back(std::sqrt(squared_norm(bu - v)));
  }
  res.u = cfg.clip_output ? clip(u) : u;
  return res;
}

ImageF admm_deblur(const ImageF& v, const BlurOperator& op, const AdmmConfig& cfg) {
  return admm_deblur_traced(v, op, cfg).u;
}

ImageF richardson_lucy_pmbm(const ImageF& v, const BlurOperator& op, int iters) {
  if (iters < 0) throw InvalidArgument("richardson-lucy: iterations must be >= 0");
  if (v.width() != op.width() || v.height() != op.height()) {
    throw InvalidArgument("richardson-lucy: image does not match the operator");
  }
  v.require_finite("richardson-lucy input");
  if (v.min_value() < 0.0) throw InvalidArgument("richardson-lucy needs v >= 0");
  ImageF u = v;
  for (int k = 0; k < iters; ++k) {
    ImageF ratio = op.apply(u);
    for (std::size_t i = 0; i < ratio.size(); ++i) {
      ratio.data()[i] = v.data()[i] / (ratio.data()[i] + 1e-8);
    }
    const ImageF corr = op.apply_adjoint(ratio);
    for (std::size_t i = 0; i < u.size(); ++i) u.data()[i] *= corr.data()[i];
  }
  return u;
}

}  // namespace pmbm
