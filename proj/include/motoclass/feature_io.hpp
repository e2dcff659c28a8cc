#pragma once

#include "motoclass/lbp.hpp"
#include "motoclass/types.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace motoclass {

/// Feature matrix for a whole image pool, one row per pool entry, with the
/// extractor parameters the rows were computed under.
struct FeaturePool {
  Eigen::MatrixXd features;
  std::vector<std::string> labels;
  LbpParams lbp;

  Index size() const { return features.rows(); }
  void validate() const;
};

/// CSV with header `label,f0,...,f{D-1}`; floats use 6 significant digits
/// unless full_precision asks for round-trip-exact output.
void write_features_csv(std::ostream& out, const FeaturePool& pool, bool full_precision = true);
/// Writes the CSV plus a `<path>.json` sidecar recording the extractor
/// parameters.
void write_features_csv(const std::filesystem::path& path, const FeaturePool& pool,
                        bool full_precision = true);

/// Reads the CSV; when a sidecar is present its parameters are restored,
/// otherwise defaults are assumed. Column count must match params.bins().
FeaturePool read_features_csv(std::istream& in, const LbpParams& params);
FeaturePool read_features_csv(const std::filesystem::path& path);

std::string feature_sidecar_json(const LbpParams& params);
LbpParams parse_feature_sidecar(const std::string& json_text);

}  // namespace motoclass
