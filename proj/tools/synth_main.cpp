// Generates a two-class texture corpus (smooth gradients vs pixel noise) for
// exercising the pipeline end to end without real footage.
#include "motoclass/synth.hpp"
#include "motoclass/types.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Synthetic two-class corpus generator"};

  std::string out;
  motoclass::Index per_class = 64;
  motoclass::Index width = 210;
  motoclass::Index height = 120;
  std::uint64_t seed = 0;
  app.add_option("--out", out, "corpus root to create")->required();
  app.add_option("--per-class", per_class, "images per class, default 64");
  app.add_option("--width", width, "image width, default 210");
  app.add_option("--height", height, "image height, default 120");
  app.add_option("--seed", seed, "master seed, default 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const int written = motoclass::write_synth_corpus(out, per_class, width, height, seed);
    std::cout << "synth: " << written << " images in " << out << "\n";
    return 0;
  } catch (const motoclass::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
