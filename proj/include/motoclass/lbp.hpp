#pragma once

#include "motoclass/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace motoclass {

/// Per-pixel code map; codes lie in [0, points+1].
using LbpMap = Plane<std::int32_t>;

/// Uniform circular LBP configuration.
///
/// Thresholding is strict: a neighbor contributes a 1 bit only when its
/// sampled intensity is strictly greater than the center pixel. This flips
/// the constant-image code from `points` to 0 relative to >=-style
/// implementations. Borders are handled by clamp-to-edge sampling so the
/// code map keeps the source dimensions.
struct LbpParams {
  int points = 24;     // circular neighbors (P)
  double radius = 3.0; // circle radius in pixels (R)

  int bins() const { return points + 2; }

  /// Throws ConfigError unless 4 <= points <= 64 and radius > 0.
  void validate() const;
};

/// L1-normalized histogram over the points+2 uniform-code bins.
struct FeatureVector {
  Eigen::VectorXd values;
  LbpParams params;
};

struct NeighborOffset {
  double drow = 0;
  double dcol = 0;
};

/// Offset k = (R sin(2 pi k / P), R cos(2 pi k / P)) for k = 0..P-1.
/// Components within 1e-8 of an integer are snapped to it, so axis-aligned
/// neighbors hit exact pixels.
std::vector<NeighborOffset> neighbor_offsets(const LbpParams& params);

/// Maps a circular bit pattern (bit k = neighbor k) to its uniform code:
/// patterns with at most 2 circular transitions map to their 1-bit count,
/// all others to points+1.
int uniform_code_from_pattern(std::uint64_t bits, int points);

/// Uniform LBP code of one pixel. Neighbors are sampled bilinearly on the
/// circle with clamp-to-edge handling.
int lbp_code(const GrayImage& img, Index row, Index col, const LbpParams& params);

/// lbp_code applied at every pixel; output has the source dimensions.
LbpMap lbp_map(const GrayImage& img, const LbpParams& params);

/// Normalized histogram of the code map: bin c = count(code == c) / pixels.
/// Throws InvalidInputError on an empty map.
FeatureVector histogram_feature(const LbpMap& map, const LbpParams& params);

/// Full descriptor: lbp_map + histogram_feature.
FeatureVector lbp_feature(const GrayImage& img, const LbpParams& params);

}  // namespace motoclass
