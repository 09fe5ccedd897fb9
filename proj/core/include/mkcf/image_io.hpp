#pragma once

#include <filesystem>

#include "mkcf/features.hpp"

namespace mkcf {

/// Decodes an image file into [0, 1] intensities, RGB order for color files.
ImageFrame read_image(const std::filesystem::path& path);

/// Encodes with 8-bit quantization; format follows the file extension.
void write_image(const std::filesystem::path& path, const ImageFrame& image);

/// True when every pixel has equal R, G and B.
bool is_grayscale(const ImageFrame& image);

}  // namespace mkcf
