#include "motoclass/lbp.hpp"

#include "motoclass/image.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace motoclass {

void LbpParams::validate() const {
  if (points < 4 || points > 64) {
    throw ConfigError("lbp: points must lie in [4, 64], got " + std::to_string(points));
  }
  if (!(radius > 0.0)) {
    throw ConfigError("lbp: radius must be positive");
  }
}

namespace {

double snap_integer(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-8 ? r : v;
}

}  // namespace

std::vector<NeighborOffset> neighbor_offsets(const LbpParams& params) {
  params.validate();
  std::vector<NeighborOffset> offsets(static_cast<std::size_t>(params.points));
  for (int k = 0; k < params.points; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / params.points;
    offsets[static_cast<std::size_t>(k)] = {snap_integer(params.radius * std::sin(angle)),
                                            snap_integer(params.radius * std::cos(angle))};
  }
  return offsets;
}

int uniform_code_from_pattern(std::uint64_t bits, int points) {
  if (points < 1 || points > 64) {
    throw ConfigError("lbp: pattern width must lie in [1, 64]");
  }
  if (points < 64) {
    bits &= (std::uint64_t{1} << points) - 1;
  }
  int transitions = 0;
  for (int k = 0; k < points; ++k) {
    const int cur = static_cast<int>((bits >> k) & 1);
    const int nxt = static_cast<int>((bits >> ((k + 1) % points)) & 1);
    transitions += cur ^ nxt;
  }
  return transitions <= 2 ? std::popcount(bits) : points + 1;
}

int lbp_code(const GrayImage& img, Index row, Index col, const LbpParams& params) {
  if (img.size() == 0) {
    throw InvalidInputError("lbp: empty image");
  }
  if (row < 0 || row >= img.rows() || col < 0 || col >= img.cols()) {
    throw IndexError("lbp: pixel (" + std::to_string(row) + ", " + std::to_string(col) +
                     ") outside image");
  }
  const auto offsets = neighbor_offsets(params);
  const double center = static_cast<double>(img(row, col));
  std::uint64_t bits = 0;
  for (int k = 0; k < params.points; ++k) {
    const auto& o = offsets[static_cast<std::size_t>(k)];
    const double v = sample_bilinear(img, static_cast<double>(row) + o.drow,
                                     static_cast<double>(col) + o.dcol);
    if (v > center) {
      bits |= std::uint64_t{1} << k;
    }
  }
  return uniform_code_from_pattern(bits, params.points);
}

LbpMap lbp_map(const GrayImage& img, const LbpParams& params) {
  params.validate();
  if (img.size() == 0) {
    throw InvalidInputError("lbp: empty image");
  }
  const auto offsets = neighbor_offsets(params);
  LbpMap map(img.rows(), img.cols());
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      const double center = static_cast<double>(img(r, c));
      std::uint64_t bits = 0;
      for (int k = 0; k < params.points; ++k) {
        const auto& o = offsets[static_cast<std::size_t>(k)];
        const double v = sample_bilinear(img, static_cast<double>(r) + o.drow,
                                         static_cast<double>(c) + o.dcol);
        if (v > center) {
          bits |= std::uint64_t{1} << k;
        }
      }
      map(r, c) = uniform_code_from_pattern(bits, params.points);
    }
  }
  return map;
}

FeatureVector histogram_feature(const LbpMap& map, const LbpParams& params) {
  params.validate();
  if (map.size() == 0) {
    throw InvalidInputError("lbp: empty code map");
  }
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(params.bins());
  for (Index r = 0; r < map.rows(); ++r) {
    for (Index c = 0; c < map.cols(); ++c) {
      const std::int32_t code = map(r, c);
      if (code < 0 || code >= params.bins()) {
        throw InvalidInputError("lbp: code " + std::to_string(code) + " outside [0, " +
                                std::to_string(params.bins() - 1) + "]");
      }
      hist[code] += 1.0;
    }
  }
  hist /= static_cast<double>(map.size());
  return {hist, params};
}

FeatureVector lbp_feature(const GrayImage& img, const LbpParams& params) {
  return histogram_feature(lbp_map(img, params), params);
}

}  // namespace motoclass
