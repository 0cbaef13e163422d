#include "pmbm/cli.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "pmbm/blind.hpp"
#include "pmbm/blur_operator.hpp"
#include "pmbm/error.hpp"
#include "pmbm/evaluation.hpp"
#include "pmbm/kernel_field.hpp"
#include "pmbm/parallel.hpp"
#include "pmbm/png_io.hpp"
#include "pmbm/restoration.hpp"
#include "pmbm/serialization.hpp"
#include "pmbm/simd/dispatch.hpp"

namespace pmbm::cli {
namespace {

namespace fs = std::filesystem;

enum class Level { Error = 0, Warn, Info, Debug };

class Log {
 public:
  Log(std::ostream& sink, Level level) : sink_(sink), level_(level) {}
  void operator()(Level lvl, const std::string& msg) const {
    static constexpr const char* names[] = {"error", "warn", "info", "debug"};
    if (lvl <= level_) sink_ << "[" << names[static_cast<int>(lvl)] << "] " << msg << "\n";
  }

 private:
  std::ostream& sink_;
  Level level_;
};

struct Globals {
  std::uint64_t seed = 0;
  double focal_px = 1000.0;
  bool focal_given = false;
  int threads = 0;
  std::string log_level = "warn";
  std::string isa = "auto";
};

Level parse_level(const std::string& s) {
  if (s == "error") return Level::Error;
  if (s == "info") return Level::Info;
  if (s == "debug") return Level::Debug;
  return Level::Warn;
}

// Focal from the trajectory file unless --focal-px was given.
CameraIntrinsics camera_for(const Globals& g, const TrajectoryFile& tf, int w, int h) {
  return CameraIntrinsics::centered(g.focal_given ? g.focal_px : tf.focal_px, w, h);
}

std::pair<int, int> parse_size(const std::string& s) {
  int w = 0, h = 0;
  char x = 0, extra = 0;
  if (std::sscanf(s.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X') ||
      w <= 0 || h <= 0) {
    throw InvalidArgument("--size expects WxH with positive integers, got '" + s + "'");
  }
  return {w, h};
}

std::string frame_name(int t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04d.png", t);
  return buf;
}

nlohmann::json psnr_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projective motion blur: synthesis, restoration and trajectory estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();
  auto* focal_opt = app.add_option("--focal-px", g.focal_px, "Focal length in pixels")
                        ->check(CLI::PositiveNumber)
                        ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--log-level", g.log_level, "error, warn, info or debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}))
      ->capture_default_str();
  app.add_option("--isa", g.isa, "Kernel instruction set: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();

  // gen-traj
  auto* gen = app.add_subcommand("gen-traj", "Write a seeded hand-tremor trajectory");
  std::string gen_out;
  TremorConfig tremor;
  std::vector<double> band{6.0, 12.0};
  gen->add_option("--out", gen_out, "Trajectory JSON path")->required();
  gen->add_option("--timesteps", tremor.timesteps)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--amplitude-deg", tremor.amplitude_deg)->capture_default_str();
  gen->add_option("--band", band, "Tremor band in Hz: LO HI")->expected(2);
  gen->add_option("--exposure", tremor.exposure_s, "Exposure in seconds")->capture_default_str();
  gen->add_flag("--centered,!--no-centered", tremor.centered, "Remove the mean pose");

  // blur
  auto* blur = app.add_subcommand("blur", "Blur a sharp image along a trajectory");
  std::string blur_in, blur_traj, blur_out, blur_dump, blur_boundary = "clamp";
  std::optional<double> blur_sat;
  double blur_noise = 0.0;
  blur->add_option("--input", blur_in)->required()->check(CLI::ExistingFile);
  blur->add_option("--traj", blur_traj)->required()->check(CLI::ExistingFile);
  blur->add_option("--out", blur_out)->required();
  blur->add_option("--saturate", blur_sat, "Apply the sensor response with this a")
      ->check(CLI::PositiveNumber);
  blur->add_option("--noise", blur_noise, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
  blur->add_option("--dump-offsets", blur_dump, "Write the forward offset field");
  blur->add_option("--boundary", blur_boundary)->check(CLI::IsMember({"clamp", "zero"}));

  // deblur
  auto* deblur = app.add_subcommand("deblur", "Non-blind restoration with a known trajectory");
  std::string db_in, db_traj, db_out, db_solver = "admm", db_cfg;
  int db_rl_iters = 30;
  deblur->add_option("--input", db_in)->required()->check(CLI::ExistingFile);
  deblur->add_option("--traj", db_traj)->required()->check(CLI::ExistingFile);
  deblur->add_option("--out", db_out)->required();
  deblur->add_option("--solver", db_solver)->check(CLI::IsMember({"admm", "rl"}))->capture_default_str();
  deblur->add_option("--admm-config", db_cfg, "ADMM schedule JSON")->check(CLI::ExistingFile);
  deblur->add_option("--rl-iters", db_rl_iters)->check(CLI::NonNegativeNumber)->capture_default_str();

  // blind
  auto* blind = app.add_subcommand("blind", "Estimate the trajectory and restore");
  std::string bl_in, bl_img, bl_traj, bl_report, bl_cfg;
  RefineConfig refine;
  blind->add_option("--input", bl_in)->required()->check(CLI::ExistingFile);
  blind->add_option("--out-image", bl_img)->required();
  blind->add_option("--out-traj", bl_traj)->required();
  blind->add_option("--report", bl_report, "Refinement report JSON");
  blind->add_option("--restarts", refine.restarts)->check(CLI::NonNegativeNumber)->capture_default_str();
  blind->add_option("--pyramid", refine.pyramid_levels)->check(CLI::PositiveNumber)->capture_default_str();
  blind->add_option("--timesteps", refine.timesteps)->check(CLI::PositiveNumber)->capture_default_str();
  blind->add_option("--max-iters", refine.max_iters)->check(CLI::PositiveNumber)->capture_default_str();
  blind->add_option("--shock-iters", refine.shock_iters, "Shock-filter steps on the loss reference")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  blind->add_option("--admm-config", bl_cfg)->check(CLI::ExistingFile);

  // kernels
  auto* kernels = app.add_subcommand("kernels", "Render the local blur kernels on a grid");
  std::string kn_traj, kn_size, kn_out;
  int kn_grid = 64, kn_patch = 31;
  kernels->add_option("--traj", kn_traj)->required()->check(CLI::ExistingFile);
  kernels->add_option("--size", kn_size, "Image size WxH")->required();
  kernels->add_option("--grid", kn_grid, "Grid step in pixels")->check(CLI::PositiveNumber)->capture_default_str();
  kernels->add_option("--patch", kn_patch, "Odd kernel window size")->capture_default_str();
  kernels->add_option("--out", kn_out)->required();

  // video
  auto* video = app.add_subcommand("video", "Write the warped frames of a trajectory");
  std::string vd_in, vd_traj, vd_dir;
  bool vd_ordered = false;
  video->add_option("--input", vd_in)->required()->check(CLI::ExistingFile);
  video->add_option("--traj", vd_traj)->required()->check(CLI::ExistingFile);
  video->add_option("--outdir", vd_dir)->required();
  video->add_flag("--ordered", vd_ordered, "Sort the poses into a temporal order first");

  // eval
  auto* eval = app.add_subcommand("eval", "Compare images (and trajectories)");
  std::string ev_a, ev_b, ev_ta, ev_tb;
  eval->add_option("--a", ev_a)->required()->check(CLI::ExistingFile);
  eval->add_option("--b", ev_b)->required()->check(CLI::ExistingFile);
  auto* ta = eval->add_option("--traj-a", ev_ta)->check(CLI::ExistingFile);
  auto* tb = eval->add_option("--traj-b", ev_tb)->check(CLI::ExistingFile);
  ta->needs(tb);
  tb->needs(ta);

  // selftest
  auto* selftest = app.add_subcommand("selftest", "Adjointness, Jacobian and oracle checks");
  double st_corrupt = 0.0;
  selftest->add_option("--inject-offset-corruption", st_corrupt)->group("");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Log log(err, parse_level(g.log_level));
  g.focal_given = focal_opt->count() > 0;
  try {
    set_num_threads(g.threads);
    if (g.isa == "scalar") simd::set_active_isa(simd::Isa::Scalar);
    if (g.isa == "avx2") simd::set_active_isa(simd::Isa::Avx2);
    log(Level::Debug, std::string("kernels: ") + std::string(simd::isa_name(simd::active_isa())));

    if (gen->parsed()) {
      tremor.band_lo_hz = band[0];
      tremor.band_hi_hz = band[1];
      tremor.seed = g.seed;
      const Trajectory traj = generate_tremor(tremor);
      save_traj(traj, g.focal_px, gen_out);
      log(Level::Info, "wrote " + std::to_string(traj.size()) + " poses to " + gen_out);
    } else if (blur->parsed()) {
      const ImageF u = load_png(blur_in);
      const TrajectoryFile tf = load_traj(blur_traj);
      const auto k = camera_for(g, tf, u.width(), u.height());
      const BoundaryPolicy bp = blur_boundary == "zero" ? BoundaryPolicy::Zero : BoundaryPolicy::Clamp;
      const BlurOperator op(tf.trajectory, k, u.width(), u.height(), AdjointMode::ExactInverse, bp);
      ImageF v = blur_efficient(u, op);
      if (blur_sat) v = saturate(v, *blur_sat);
      if (blur_noise > 0.0) {
        std::mt19937_64 rng(g.seed);
        std::normal_distribution<double> noise(0.0, blur_noise);
        for (double& s : v.samples()) s += noise(rng);
      }
      save_png(clip(v), blur_out);
      if (!blur_dump.empty()) save_offsets(op.forward_field(), blur_dump);
    } else if (deblur->parsed()) {
      const ImageF v = load_png(db_in);
      const TrajectoryFile tf = load_traj(db_traj);
      const auto k = camera_for(g, tf, v.width(), v.height());
      const BlurOperator op(tf.trajectory, k, v.width(), v.height());
      ImageF u;
      if (db_solver == "rl") {
        u = richardson_lucy_pmbm(v, op, db_rl_iters);
      } else {
        const AdmmConfig cfg =
            db_cfg.empty() ? AdmmConfig::defaults() : admm_config_from_json(read_json_file(db_cfg));
        const AdmmResult res = admm_deblur_traced(v, op, cfg);
        log(Level::Info, "data residual " + std::to_string(res.residuals.front()) + " -> " +
                             std::to_string(res.residuals.back()));
        u = res.u;
      }
      save_png(u, db_out);
    } else if (blind->parsed()) {
      const ImageF v = load_png(bl_in);
      const auto k = CameraIntrinsics::centered(g.focal_px, v.width(), v.height());
      const AdmmConfig cfg =
          bl_cfg.empty() ? AdmmConfig::defaults() : admm_config_from_json(read_json_file(bl_cfg));
      refine.seed = g.seed;
      const RefineReport rep = blind_deblur(v, k, refine, cfg);
      log(Level::Info, "winner " + rep.restarts[rep.winner].label + ", loss " +
                           std::to_string(rep.loss_trace.back()));
      save_png(rep.restoration, bl_img);
      save_traj(rep.trajectory, g.focal_px, bl_traj);
      if (!bl_report.empty()) write_json_file(refine_report_to_json(rep, g.focal_px), bl_report);
    } else if (kernels->parsed()) {
      const auto [w, h] = parse_size(kn_size);
      const TrajectoryFile tf = load_traj(kn_traj);
      const KernelMosaic km =
          kernel_field(tf.trajectory, camera_for(g, tf, w, h), w, h, kn_grid, kn_patch);
      save_png(km.mosaic, kn_out);
    } else if (video->parsed()) {
      const ImageF u = load_png(vd_in);
      const TrajectoryFile tf = load_traj(vd_traj);
      const auto frames =
          render_video(u, tf.trajectory, camera_for(g, tf, u.width(), u.height()), vd_ordered);
      std::error_code ec;
      fs::create_directories(vd_dir, ec);
      if (ec) throw IoError("cannot create " + vd_dir + ": " + ec.message());
      for (std::size_t t = 0; t < frames.size(); ++t) {
        save_png(frames[t], fs::path(vd_dir) / frame_name(static_cast<int>(t)));
      }
    } else if (eval->parsed()) {
      const ImageF a = load_png(ev_a);
      const ImageF b = load_png(ev_b);
      nlohmann::json j = {{"psnr", psnr_json(psnr(a, b))}, {"ssim", ssim(a, b)}};
      if (!ev_ta.empty()) {
        const TrajectoryFile fa = load_traj(ev_ta);
        const TrajectoryFile fb = load_traj(ev_tb);
        const auto k = camera_for(g, fa, a.width(), a.height());
        const auto grid = emd_grid(a.width(), a.height());
        j["emd"] = emd_distance(fa.trajectory, fb.trajectory, k, grid);
      }
      out << j.dump(2) << "\n";
    } else if (selftest->parsed()) {
      bool ok = true;
      for (const auto& c : run_selftest(st_corrupt)) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        ok = ok && c.passed;
      }
      if (!ok) return 1;
    }
  } catch (const ComputeError& e) {
    log(Level::Error, e.what());
    return 1;
  } catch (const Error& e) {
    log(Level::Error, e.what());
    return 2;
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return 2;
  }
  return 0;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace pmbm::cli
