#pragma once

#include "motoclass/types.hpp"

#include <algorithm>
#include <cmath>

namespace motoclass {

/// 3-channel 8-bit image stored as separate planes of equal shape.
struct RgbImage {
  Plane<std::uint8_t> r, g, b;

  Index width() const { return r.cols(); }
  Index height() const { return r.rows(); }
};

/// BT.601 luminance: round(0.299 R + 0.587 G + 0.114 B), clamped to [0,255].
/// Exact on already-gray frames (R=G=B returns the common value).
GrayImage to_grayscale(const RgbImage& frame);

/// Bilinear sample at real (row, col). Coordinates outside the image are
/// clamped to the nearest edge pixel, so any finite coordinate is valid.
template <typename Derived>
double sample_bilinear(const Eigen::MatrixBase<Derived>& img, double row, double col) {
  const Index rows = img.rows();
  const Index cols = img.cols();
  row = std::clamp(row, 0.0, static_cast<double>(rows - 1));
  col = std::clamp(col, 0.0, static_cast<double>(cols - 1));
  const Index r0 = static_cast<Index>(std::floor(row));
  const Index c0 = static_cast<Index>(std::floor(col));
  const Index r1 = std::min(r0 + 1, rows - 1);
  const Index c1 = std::min(c0 + 1, cols - 1);
  const double fr = row - static_cast<double>(r0);
  const double fc = col - static_cast<double>(c0);
  const double v00 = static_cast<double>(img(r0, c0));
  const double v01 = static_cast<double>(img(r0, c1));
  const double v10 = static_cast<double>(img(r1, c0));
  const double v11 = static_cast<double>(img(r1, c1));
  return (1.0 - fr) * ((1.0 - fc) * v00 + fc * v01) + fr * ((1.0 - fc) * v10 + fc * v11);
}

}  // namespace motoclass
