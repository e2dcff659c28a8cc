#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace motoclass {

using Eigen::Index;

/// Dense row-major raster plane. Pixel (x, y) lives at (row y, col x).
template <typename Scalar>
using Plane = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Single-channel 8-bit image.
using GrayImage = Plane<std::uint8_t>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Validation-class errors. The CLI maps these to exit code 2.
struct InvalidInputError : Error {
  using Error::Error;
};
struct MeshError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};
struct IndexError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};
struct LayoutError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};
struct ConfigError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};
struct DimensionError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};

// Runtime-class errors (exit code 1).
struct IoError : Error {
  using Error::Error;
};

}  // namespace motoclass
