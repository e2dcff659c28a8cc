#pragma once

#include "motoclass/lbp.hpp"
#include "motoclass/svm.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace motoclass {

/// A trained model plus the context needed to apply it to raw images.
struct ModelBundle {
  LinearModel model;
  /// Extractor parameters, present when the model consumes image features.
  std::optional<LbpParams> lbp;
  /// Class-name mapping for binary models (+1 / -1).
  std::string positive_label;
  std::string negative_label;
  std::optional<int> scenario_id;
};

/// Versioned JSON with full-precision numbers; read(write(m)) reproduces
/// every weight bit for bit.
void write_model_json(std::ostream& out, const ModelBundle& bundle);
void write_model_json(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle read_model_json(std::istream& in);
ModelBundle read_model_json(const std::filesystem::path& path);

/// Scenario as a standalone JSON object (all fields present).
std::string scenario_to_json_text(const SvmScenario& scenario);
/// Lenient parse for config files: absent fields keep their defaults.
SvmScenario scenario_from_json_text(const std::string& text);

}  // namespace motoclass
