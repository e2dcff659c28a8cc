#include "motoclass/image.hpp"

#include <cmath>

namespace motoclass {

GrayImage to_grayscale(const RgbImage& frame) {
  if (frame.r.rows() != frame.g.rows() || frame.r.rows() != frame.b.rows() ||
      frame.r.cols() != frame.g.cols() || frame.r.cols() != frame.b.cols()) {
    throw DimensionError("to_grayscale: channel planes differ in shape");
  }
  if (frame.r.size() == 0) {
    throw InvalidInputError("to_grayscale: zero-size frame");
  }
  GrayImage out(frame.r.rows(), frame.r.cols());
  for (Index y = 0; y < out.rows(); ++y) {
    for (Index x = 0; x < out.cols(); ++x) {
      const double lum = 0.299 * frame.r(y, x) + 0.587 * frame.g(y, x) + 0.114 * frame.b(y, x);
      const long v = std::lround(lum);
      out(y, x) = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
    }
  }
  return out;
}

}  // namespace motoclass
