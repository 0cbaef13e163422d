#pragma once

#include <filesystem>

#include "pmbm/image.hpp"

namespace pmbm {

/// Decodes an 8- or 16-bit grayscale or RGB PNG (palette images are expanded
/// to RGB) into [0,1] by dividing by 2^bits - 1. Color types with an alpha
/// channel are rejected. Throws IoError or DecodeError; never returns a
/// partially decoded image.
ImageF load_png(const std::filesystem::path& path);

/// Writes an 8-bit PNG: samples are clamped to [0,1] and quantized with
/// round(x * 255).
void save_png(const ImageF& img, const std::filesystem::path& path);

}  // namespace pmbm
