#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace pmbm {

enum class BoundaryPolicy { Clamp, Zero };

/// Floating-point image, row-major with interleaved channels (1 or 3).
/// Samples are nominally in [0,1]; storage is double so operator tests can
/// resolve differences far below 8-bit quantization.
class ImageF {
 public:
  ImageF() = default;
  ImageF(int width, int height, int channels, double fill = 0.0);
  /// Takes ownership of `data`; throws InvalidArgument on a length mismatch
  /// or a non-finite sample.
  ImageF(int width, int height, int channels, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> samples() noexcept { return data_; }
  std::span<const double> samples() const noexcept { return data_; }

  double& at(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  bool same_shape(const ImageF& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  /// Throws InvalidArgument if any sample is NaN or infinite.
  void require_finite(const char* what) const;

  double min_value() const;
  double max_value() const;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Per-channel result of an interpolated read; unused channels are zero.
using PixelSample = std::array<double, 3>;

/// Bilinear read at a continuous pixel position (pixel centers on integers).
/// Clamp replicates the border, Zero treats out-of-range neighbors as 0.
PixelSample sample_bilinear(const ImageF& img, double x, double y,
                            BoundaryPolicy policy = BoundaryPolicy::Clamp);

void require_same_shape(const ImageF& a, const ImageF& b, const char* what);

// Element-wise helpers used throughout the solvers.
ImageF operator+(const ImageF& a, const ImageF& b);
ImageF operator-(const ImageF& a, const ImageF& b);
ImageF operator*(double s, const ImageF& a);
double dot(const ImageF& a, const ImageF& b);
double squared_norm(const ImageF& a);
double sum(const ImageF& a);
ImageF clip(const ImageF& a, double lo = 0.0, double hi = 1.0);

/// Single channel as its own image.
ImageF extract_channel(const ImageF& img, int c);
/// Luma-free mean over channels, used for metrics on color input.
ImageF to_gray(const ImageF& img);

}  // namespace pmbm
