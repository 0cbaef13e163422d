#include "pmbm/blur_operator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include "pmbm/error.hpp"
#include "pmbm/parallel.hpp"
#include "pmbm/simd/kernels.hpp"

namespace pmbm {
namespace {

void require_operator_shape(const ImageF& img, const BlurOperator& op,
                            const char* what) {
  if (img.width() != op.width() || img.height() != op.height()) {
    throw InvalidArgument(std::string(what) + ": image is " +
                          std::to_string(img.width()) + "x" +
                          std::to_string(img.height()) + " but the operator is " +
                          std::to_string(op.width()) + "x" +
                          std::to_string(op.height()));
  }
}

simd::OffsetTap plain_tap(const OffsetField& f, int t, double sign,
                          double weight) {
  return {f.dx(t), f.dy(t), 0.0, 0.0, sign, weight};
}

// Adds weight * frame for every map, one full-image pass per map.
ImageF average_of_warps(const ImageF& src, const std::vector<Homography>& maps,
                        BoundaryPolicy boundary) {
  const auto isa = simd::active_isa();
  const auto view = simd::view_of(src);
  const std::size_t row_len = static_cast<std::size_t>(src.width()) * src.channels();
  ImageF sum(src.width(), src.height(), src.channels());
  ImageF frame(src.width(), src.height(), src.channels());
  for (const Homography& h : maps) {
    const auto m = h.row_major();
    parallel_for_rows(src.height(), [&](int y) {
      double* row = frame.data() + y * row_len;
      std::fill(row, row + row_len, 0.0);
      simd::accumulate_homography_row(isa, view, y, m.data(), 1.0, boundary, row);
    });
    simd::axpby(isa, 1.0, frame.data(), 1.0, sum.data(), sum.size());
  }
  for (double& v : sum.samples()) v /= static_cast<double>(maps.size());
  return sum;
}

}  // namespace

TapLattice TapLattice::for_timesteps(int timesteps) {
  if (timesteps < 1) throw InvalidArgument("lattice needs at least one timestep");
  TapLattice lat;
  lat.timesteps_ = timesteps;
  lat.side_ = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(timesteps))));
  while (lat.side_ * lat.side_ < timesteps) ++lat.side_;
  while ((lat.side_ - 1) * (lat.side_ - 1) >= timesteps) --lat.side_;
  const int slots = lat.side_ * lat.side_;
  const int copies_of_last = slots - timesteps + 1;
  const int origin = lat.side_ / 2;
  for (int s = 0; s < slots; ++s) {
    Tap tap;
    tap.px = s % lat.side_ - origin;
    tap.py = s / lat.side_ - origin;
    tap.timestep = std::min(s, timesteps - 1);
    tap.weight = tap.timestep < timesteps - 1
                     ? 1.0 / timesteps
                     : 1.0 / timesteps / copies_of_last;
    lat.taps_.push_back(tap);
  }
  return lat;
}

struct BlurOperator::FusedCache {
  std::once_flag once;
  std::vector<double> offsets;
};

BlurOperator::BlurOperator(Trajectory traj, CameraIntrinsics k, int width,
                           int height, AdjointMode mode, BoundaryPolicy boundary)
    : traj_(std::move(traj)),
      k_(k),
      width_(width),
      height_(height),
      mode_(mode),
      boundary_(boundary),
      forward_(1, 1, 1),
      lattice_(TapLattice::for_timesteps(traj_.size())) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("blur operator dimensions must be positive");
  }
  maps_.reserve(traj_.size());
  inverse_maps_.reserve(traj_.size());
  for (const auto& pose : traj_) {
    maps_.push_back(homography_from_pose(pose, k_));
    inverse_maps_.push_back(maps_.back().inverse());
  }
  forward_ = offsets_from_maps(inverse_maps_, width_, height_);
  fused_ = std::make_shared<FusedCache>();
}

const std::vector<double>& BlurOperator::fused_offsets() const {
  std::call_once(fused_->once, [this] {
    const auto& taps = lattice_.taps();
    const int n = static_cast<int>(taps.size());
    const int nb = (width_ + 3) / 4;
    auto& out = fused_->offsets;
    out.assign(static_cast<std::size_t>(height_) * nb * n * 8, 0.0);
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        const std::size_t k = static_cast<std::size_t>(y) * width_ + x;
        double* block = out.data() + (static_cast<std::size_t>(y) * nb + x / 4) * n * 8 + x % 4;
        for (int s = 0; s < n; ++s) {
          block[s * 8] = forward_.dx(taps[s].timestep)[k] - taps[s].px;
          block[s * 8 + 4] = forward_.dy(taps[s].timestep)[k] - taps[s].py;
        }
      }
    }
  });
  return fused_->offsets;
}

BlurOperator BlurOperator::with_adjoint_mode(AdjointMode mode) const {
  BlurOperator copy = *this;
  copy.mode_ = mode;
  return copy;
}

BlurOperator BlurOperator::with_boundary(BoundaryPolicy boundary) const {
  BlurOperator copy = *this;
  copy.boundary_ = boundary;
  return copy;
}

BlurOperator BlurOperator::with_corrupted_offsets(double fraction) const {
  BlurOperator copy = *this;
  copy.fused_ = std::make_shared<FusedCache>();
  for (int t = 0; t < copy.forward_.timesteps(); ++t) {
    double* dx = copy.forward_.dx(t);
    double* dy = copy.forward_.dy(t);
    for (std::size_t i = 0; i < copy.forward_.frame_size(); ++i) {
      dx[i] *= 1.0 + fraction;
      dy[i] *= 1.0 + fraction;
    }
  }
  return copy;
}

ImageF BlurOperator::apply(const ImageF& u) const { return blur_efficient(u, *this); }

ImageF BlurOperator::apply_adjoint(const ImageF& w) const {
  return adjoint(w, *this);
}

ImageF blur_naive(const ImageF& u, const BlurOperator& op) {
  require_operator_shape(u, op, "blur_naive");
  const auto isa = simd::active_isa();
  const auto view = simd::view_of(u);
  const std::size_t row_len = static_cast<std::size_t>(u.width()) * u.channels();
  const auto& field = op.forward_field();
  ImageF sum(u.width(), u.height(), u.channels());
  ImageF frame(u.width(), u.height(), u.channels());
  for (int t = 0; t < op.timesteps(); ++t) {
    const simd::OffsetTap tap = plain_tap(field, t, 1.0, 1.0);
    parallel_for_rows(u.height(), [&](int y) {
      double* row = frame.data() + y * row_len;
      std::fill(row, row + row_len, 0.0);
      simd::accumulate_offset_row(isa, view, y, tap, op.boundary(), row);
    });
    simd::axpby(isa, 1.0, frame.data(), 1.0, sum.data(), sum.size());
  }
  for (double& v : sum.samples()) v /= static_cast<double>(op.timesteps());
  return sum;
}

ImageF blur_efficient(const ImageF& u, const BlurOperator& op) {
  require_operator_shape(u, op, "blur_efficient");
  const auto isa = simd::active_isa();
  const auto view = simd::view_of(u);
  const std::size_t row_len = static_cast<std::size_t>(u.width()) * u.channels();
  std::vector<double> px, py, weight;
  for (const Tap& tap : op.lattice().taps()) {
    px.push_back(tap.px);
    py.push_back(tap.py);
    weight.push_back(tap.weight);
  }
  const simd::LatticeTaps taps{op.fused_offsets().data(), px.data(), py.data(),
                               weight.data(), static_cast<int>(px.size())};
  ImageF out(u.width(), u.height(), u.channels());
  parallel_for_rows(u.height(), [&](int y) {
    simd::accumulate_lattice_row(isa, view, y, taps, op.boundary(), out.data() + y * row_len);
  });
  return out;
}

ImageF blur_homography(const ImageF& u, const BlurOperator& op) {
  require_operator_shape(u, op, "blur_homography");
  return average_of_warps(u, op.inverse_homographies(), op.boundary());
}

ImageF adjoint(const ImageF& w, const BlurOperator& op) {
  require_operator_shape(w, op, "adjoint");
  const auto isa = simd::active_isa();
  const auto view = simd::view_of(w);
  const std::size_t row_len = static_cast<std::size_t>(w.width()) * w.channels();
  const double weight = 1.0 / op.timesteps();
  ImageF out(w.width(), w.height(), w.channels());
  if (op.adjoint_mode() == AdjointMode::ExactInverse) {
    std::vector<std::array<double, 9>> maps;
    for (const auto& h : op.homographies()) maps.push_back(h.row_major());
    parallel_for_rows(w.height(), [&](int y) {
      double* row = out.data() + y * row_len;
      for (const auto& m : maps) {
        simd::accumulate_homography_row(isa, view, y, m.data(), weight,
                                        op.boundary(), row);
      }
    });
  } else {
    const auto& field = op.forward_field();
    parallel_for_rows(w.height(), [&](int y) {
      double* row = out.data() + y * row_len;
      for (int t = 0; t < op.timesteps(); ++t) {
        simd::accumulate_offset_row(isa, view, y, plain_tap(field, t, -1.0, weight),
                                    op.boundary(), row);
      }
    });
  }
  return out;
}

OffsetField compensated_offsets(const BlurOperator& op) {
  const auto& field = op.forward_field();
  const auto& taps = op.lattice().taps();
  OffsetField out(op.width(), op.height(), static_cast<int>(taps.size()));
  for (std::size_t s = 0; s < taps.size(); ++s) {
    const int t = taps[s].timestep;
    for (std::size_t i = 0; i < field.frame_size(); ++i) {
      out.dx(static_cast<int>(s))[i] = field.dx(t)[i] - taps[s].px;
      out.dy(static_cast<int>(s))[i] = field.dy(t)[i] - taps[s].py;
    }
  }
  return out;
}

double adjoint_discrepancy(const BlurOperator& op, const ImageF& u, const ImageF& w) {
  const double lhs = dot(w, op.apply(u));
  const double rhs = dot(op.apply_adjoint(w), u);
  return std::abs(lhs - rhs) / std::abs(lhs);
}

double saturate(double x, double a) {
  if (!(a > 0.0)) throw InvalidArgument("saturation parameter must be positive");
  const double z = a * (x - 1.0);
  // above the knee x - (x - 1) cancels, so use the folded form there
  if (z > 0.0) return 1.0 - std::log1p(std::exp(-z)) / a;
  return x - std::log1p(std::exp(z)) / a;
}

ImageF saturate(const ImageF& x, double a) {
  ImageF out = x;
  for (double& v : out.samples()) v = saturate(v, a);
  return out;
}

}  // namespace pmbm
