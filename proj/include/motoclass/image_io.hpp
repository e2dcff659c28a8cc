#pragma once

#include "motoclass/image.hpp"
#include "motoclass/types.hpp"

#include <filesystem>

namespace motoclass {

/// True when the file starts with a PNG or JPEG signature.
bool is_supported_image(const std::filesystem::path& path);

/// Decodes a PNG or JPEG (detected by magic bytes, not extension) to RGB.
/// Grayscale sources replicate into the three channels; alpha is dropped.
/// Throws IoError on missing files or decode failures.
RgbImage read_image_rgb(const std::filesystem::path& path);

/// read_image_rgb followed by to_grayscale.
GrayImage read_image_gray(const std::filesystem::path& path);

void write_png_gray(const std::filesystem::path& path, const GrayImage& img);
void write_jpeg_gray(const std::filesystem::path& path, const GrayImage& img, int quality = 95);

}  // namespace motoclass
