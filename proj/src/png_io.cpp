#include "pmbm/png_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "pmbm/error.hpp"

namespace pmbm {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp. The message is copied out here and
// turned into an exception once control is back in C++ frames.
struct ErrorSink {
  char message[256] = "unknown libpng error";
};

void on_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

struct DecodedRows {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<png_byte> bytes;
  std::vector<png_bytep> row_ptrs;
};

// Returns false (with sink->message set) on any libpng error. Only plain data
// is touched after setjmp, so the longjmp path leaks nothing.
bool decode(std::FILE* file, DecodedRows& out, ErrorSink& sink,
            std::string& unsupported) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_error, on_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, file);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA ||
      color_type == PNG_COLOR_TYPE_RGB_ALPHA) {
    unsupported = "PNG color type with alpha channel is not supported";
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) {
    unsupported = "PNG transparency (tRNS) is not supported";
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_read_update_info(png, info);

  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.bytes.resize(stride * out.height);
  out.row_ptrs.resize(out.height);
  for (png_uint_32 y = 0; y < out.height; ++y) {
    out.row_ptrs[y] = out.bytes.data() + y * stride;
  }
  png_read_image(png, out.row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

}  // namespace

ImageF load_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string() + " for reading");

  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    throw DecodeError(path.string() + " is not a PNG file");
  }
  std::rewind(file.get());

  DecodedRows rows;
  ErrorSink sink;
  std::string unsupported;
  if (!decode(file.get(), rows, sink, unsupported)) {
    if (!unsupported.empty()) throw DecodeError(path.string() + ": " + unsupported);
    throw DecodeError("failed to decode " + path.string() + ": " + sink.message);
  }
  if (rows.channels != 1 && rows.channels != 3) {
    throw DecodeError(path.string() + ": unsupported channel count " +
                      std::to_string(rows.channels));
  }

  const std::size_t count =
      static_cast<std::size_t>(rows.width) * rows.height * rows.channels;
  std::vector<double> data(count);
  if (rows.bit_depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned v = (static_cast<unsigned>(rows.bytes[2 * i]) << 8) |
                         rows.bytes[2 * i + 1];
      data[i] = v / 65535.0;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) data[i] = rows.bytes[i] / 255.0;
  }
  return ImageF(static_cast<int>(rows.width), static_cast<int>(rows.height),
                rows.channels, std::move(data));
}

void save_png(const ImageF& img, const std::filesystem::path& path) {
  if (img.empty()) throw InvalidArgument("save_png: empty image");
  const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
  std::vector<png_byte> bytes(stride * img.height());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const double v = std::min(1.0, std::max(0.0, img.data()[i]));
    bytes[i] = static_cast<png_byte>(std::lround(v * 255.0));
  }

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open " + path.string() + " for writing");

  ErrorSink sink;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_error, on_warning);
  if (png == nullptr) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  std::vector<png_bytep> row_ptrs(img.height());
  for (int y = 0; y < img.height(); ++y) row_ptrs[y] = bytes.data() + y * stride;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to write " + path.string() + ": " + sink.message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, img.width(), img.height(), 8,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError("failed to flush " + path.string());
}

}  // namespace pmbm
