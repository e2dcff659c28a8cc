#pragma once

#include "motoclass/types.hpp"

#include <cstdint>
#include <filesystem>

namespace motoclass {

/// Smooth class: a low-frequency gradient-plus-ripple patch. Texturally flat
/// under a local binary pattern, so it separates cleanly from noise.
GrayImage synth_smooth_patch(Index width, Index height, std::uint64_t seed);

/// Rough class: independent uniform pixel noise.
GrayImage synth_noise_patch(Index width, Index height, std::uint64_t seed);

/// Writes per_class patches of each class as PNGs under
/// root/{smooth,noise}/NNNN.png (two-class dataset layout). Patch seeds
/// derive from `seed`. Returns the number of files written.
int write_synth_corpus(const std::filesystem::path& root, int per_class, Index width,
                       Index height, std::uint64_t seed);

}  // namespace motoclass
