#include "motoclass/feature_io.hpp"

#include "csv.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace motoclass {

namespace fs = std::filesystem;
using nlohmann::json;

void FeaturePool::validate() const {
  lbp.validate();
  if (features.rows() == 0) throw InvalidInputError("features: empty pool");
  if (static_cast<Index>(labels.size()) != features.rows()) {
    throw InvalidInputError("features: " + std::to_string(labels.size()) + " labels for " +
                            std::to_string(features.rows()) + " rows");
  }
  if (features.cols() != lbp.bins()) {
    throw DimensionError("features: " + std::to_string(features.cols()) +
                         " columns, parameters imply " + std::to_string(lbp.bins()));
  }
  if (!features.allFinite()) throw InvalidInputError("features: non-finite value");
}

void write_features_csv(std::ostream& out, const FeaturePool& pool, bool full_precision) {
  pool.validate();
  out << "label";
  for (Index j = 0; j < pool.features.cols(); ++j) out << ",f" << j;
  out << '\n';
  for (Index i = 0; i < pool.features.rows(); ++i) {
    out << csv::escape(pool.labels[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < pool.features.cols(); ++j) {
      out << ',' << csv::format_double(pool.features(i, j), full_precision);
    }
    out << '\n';
  }
}

void write_features_csv(const fs::path& path, const FeaturePool& pool, bool full_precision) {
  std::ofstream out(path);
  if (!out) throw IoError("features: cannot open '" + path.string() + "' for writing");
  write_features_csv(out, pool, full_precision);
  if (!out.good()) throw IoError("features: write to '" + path.string() + "' failed");

  const fs::path sidecar = path.string() + ".json";
  std::ofstream side(sidecar);
  if (!side) throw IoError("features: cannot open '" + sidecar.string() + "' for writing");
  side << feature_sidecar_json(pool.lbp) << '\n';
}

FeaturePool read_features_csv(std::istream& in, const LbpParams& params) {
  params.validate();
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("features: empty input");
  std::string expected = "label";
  for (int j = 0; j < params.bins(); ++j) expected += ",f" + std::to_string(j);
  if (csv::strip_cr(line) != expected) {
    throw InvalidInputError("features: unexpected header '" + line + "'");
  }

  FeaturePool pool;
  pool.lbp = params;
  std::vector<std::string> labels;
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto cells = csv::split_line(line);
    if (static_cast<int>(cells.size()) != params.bins() + 1) {
      throw InvalidInputError("features: line " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(params.bins() + 1));
    }
    labels.push_back(cells[0]);
    for (int j = 1; j <= params.bins(); ++j) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cells[static_cast<std::size_t>(j)], &used);
        if (used != cells[static_cast<std::size_t>(j)].size()) throw std::invalid_argument("");
        values.push_back(v);
      } catch (const std::exception&) {
        throw InvalidInputError("features: line " + std::to_string(line_no) +
                                " has a malformed number '" +
                                cells[static_cast<std::size_t>(j)] + "'");
      }
    }
  }
  if (labels.empty()) throw InvalidInputError("features: no data rows");

  pool.labels = std::move(labels);
  pool.features.resize(static_cast<Index>(pool.labels.size()), params.bins());
  for (Index i = 0; i < pool.features.rows(); ++i) {
    for (Index j = 0; j < pool.features.cols(); ++j) {
      pool.features(i, j) = values[static_cast<std::size_t>(i * params.bins() + j)];
    }
  }
  pool.validate();
  return pool;
}

FeaturePool read_features_csv(const fs::path& path) {
  LbpParams params;
  const fs::path sidecar = path.string() + ".json";
  if (fs::exists(sidecar)) {
    std::ifstream side(sidecar);
    if (!side) throw IoError("features: cannot open '" + sidecar.string() + "'");
    std::stringstream buf;
    buf << side.rdbuf();
    params = parse_feature_sidecar(buf.str());
  }
  std::ifstream in(path);
  if (!in) throw IoError("features: cannot open '" + path.string() + "'");
  return read_features_csv(in, params);
}

std::string feature_sidecar_json(const LbpParams& params) {
  const json j{{"points", params.points},
               {"radius", params.radius},
               {"method", "uniform-circular-lbp-histogram"},
               {"threshold", "strict-greater"},
               {"border", "clamp"}};
  return j.dump(2);
}

LbpParams parse_feature_sidecar(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("features: malformed sidecar: ") + e.what());
  }
  LbpParams params;
  try {
    params.points = j.at("points").get<int>();
    params.radius = j.at("radius").get<double>();
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("features: sidecar missing field: ") + e.what());
  }
  params.validate();
  return params;
}

}  // namespace motoclass
