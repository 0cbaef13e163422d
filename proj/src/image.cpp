#include "pmbm/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmbm/error.hpp"
#include "pmbm/simd/kernels.hpp"
#include "simd/bilinear.hpp"

namespace pmbm {
namespace {

void check_dims(int width, int height, int channels) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("image dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw InvalidArgument("images have 1 or 3 channels, got " +
                          std::to_string(channels));
  }
}

}  // namespace

ImageF::ImageF(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  if (!std::isfinite(fill)) throw InvalidArgument("non-finite fill value");
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

ImageF::ImageF(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw InvalidArgument("sample count " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height) + "x" +
                          std::to_string(channels));
  }
  require_finite("image");
}

void ImageF::require_finite(const char* what) const {
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + " contains non-finite samples");
    }
  }
}

double ImageF::min_value() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double ImageF::max_value() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

PixelSample sample_bilinear(const ImageF& img, double x, double y,
                            BoundaryPolicy policy) {
  if (img.empty()) throw InvalidArgument("sample_bilinear on an empty image");
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidArgument("sample_bilinear: non-finite coordinate");
  }
  PixelSample out{};
  for (int c = 0; c < img.channels(); ++c) {
    out[c] = simd::detail::bilinear(img.data(), img.width(), img.height(),
                                    img.channels(), x, y, c, policy);
  }
  return out;
}

void require_same_shape(const ImageF& a, const ImageF& b, const char* what) {
  if (!a.same_shape(b)) {
    throw InvalidArgument(std::string(what) + ": shape mismatch (" +
                          std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + "x" +
                          std::to_string(a.channels()) + " vs " +
                          std::to_string(b.width()) + "x" +
                          std::to_string(b.height()) + "x" +
                          std::to_string(b.channels()) + ")");
  }
}

ImageF operator+(const ImageF& a, const ImageF& b) {
  require_same_shape(a, b, "image addition");
  ImageF out = b;
  simd::axpby(1.0, a.data(), 1.0, out.data(), out.size());
  return out;
}

ImageF operator-(const ImageF& a, const ImageF& b) {
  require_same_shape(a, b, "image subtraction");
  ImageF out = b;
  simd::axpby(1.0, a.data(), -1.0, out.data(), out.size());
  return out;
}

ImageF operator*(double s, const ImageF& a) {
  ImageF out = a;
  for (double& v : out.samples()) v *= s;
  return out;
}

double dot(const ImageF& a, const ImageF& b) {
  require_same_shape(a, b, "dot");
  return simd::dot(a.data(), b.data(), a.size());
}

double squared_norm(const ImageF& a) {
  return simd::dot(a.data(), a.data(), a.size());
}

double sum(const ImageF& a) {
  double s = 0.0;
  for (double v : a.samples()) s += v;
  return s;
}

ImageF clip(const ImageF& a, double lo, double hi) {
  ImageF out = a;
  for (double& v : out.samples()) v = std::clamp(v, lo, hi);
  return out;
}

ImageF extract_channel(const ImageF& img, int c) {
  if (c < 0 || c >= img.channels()) throw InvalidArgument("channel out of range");
  ImageF out(img.width(), img.height(), 1);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    out.data()[i] = img.data()[i * img.channels() + c];
  }
  return out;
}

ImageF to_gray(const ImageF& img) {
  if (img.channels() == 1) return img;
  ImageF out(img.width(), img.height(), 1);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    double s = 0.0;
    for (int c = 0; c < img.channels(); ++c) s += img.data()[i * img.channels() + c];
    out.data()[i] = s / img.channels();
  }
  return out;
}

}  // namespace pmbm
