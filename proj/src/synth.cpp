#include "motoclass/synth.hpp"

#include "motoclass/image_io.hpp"
#include "motoclass/rng.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace motoclass {

namespace fs = std::filesystem;

GrayImage synth_smooth_patch(Index width, Index height, std::uint64_t seed) {
  if (width <= 0 || height <= 0) throw InvalidInputError("synth: patch size must be positive");
  Rng rng(seed);
  const double angle = rng.unit() * 2 * std::numbers::pi;
  const double gx = std::cos(angle), gy = std::sin(angle);
  const double freq = 0.5 + 1.5 * rng.unit();
  const double phase = rng.unit() * 2 * std::numbers::pi;
  const double base = 96 + 64 * rng.unit();

  GrayImage img(height, width);
  for (Index y = 0; y < height; ++y) {
    for (Index x = 0; x < width; ++x) {
      const double u = gx * static_cast<double>(x) / static_cast<double>(width) +
                       gy * static_cast<double>(y) / static_cast<double>(height);
      const double v = base + 60 * std::sin(2 * std::numbers::pi * freq * u + phase);
      const long q = std::lround(v);
      img(y, x) = static_cast<std::uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
    }
  }
  return img;
}

GrayImage synth_noise_patch(Index width, Index height, std::uint64_t seed) {
  if (width <= 0 || height <= 0) throw InvalidInputError("synth: patch size must be positive");
  Rng rng(seed);
  GrayImage img(height, width);
  for (Index y = 0; y < height; ++y) {
    for (Index x = 0; x < width; ++x) {
      img(y, x) = static_cast<std::uint8_t>(rng.bounded(256));
    }
  }
  return img;
}

int write_synth_corpus(const fs::path& root, int per_class, Index width, Index height,
                       std::uint64_t seed) {
  if (per_class <= 0) throw InvalidInputError("synth: per_class must be positive");
  const fs::path smooth_dir = root / "smooth";
  const fs::path noise_dir = root / "noise";
  fs::create_directories(smooth_dir);
  fs::create_directories(noise_dir);

  char name[16];
  for (int i = 0; i < per_class; ++i) {
    std::snprintf(name, sizeof(name), "%04d.png", i);
    write_png_gray(smooth_dir / name,
                   synth_smooth_patch(width, height,
                                      derive_seed(seed, seed_stream::kSynth,
                                                  static_cast<std::uint64_t>(i))));
    write_png_gray(noise_dir / name,
                   synth_noise_patch(width, height,
                                     derive_seed(seed, seed_stream::kSynth,
                                                 static_cast<std::uint64_t>(per_class + i))));
  }
  return 2 * per_class;
}

}  // namespace motoclass
