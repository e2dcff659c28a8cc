#include "motoclass/model_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace motoclass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json scenario_to_json(const SvmScenario& sc) {
  json j{{"C", sc.C},
         {"tol", sc.tol},
         {"loss", to_string(sc.loss)},
         {"penalty", to_string(sc.penalty)},
         {"dual", sc.dual},
         {"multi_class", to_string(sc.multi_class)},
         {"max_iter", sc.max_iter},
         {"fit_intercept", sc.fit_intercept},
         {"intercept_scaling", sc.intercept_scaling}};
  if (!sc.class_weights.empty()) j["class_weights"] = sc.class_weights;
  return j;
}

SvmScenario scenario_from_json(const json& j) {
  SvmScenario sc;
  sc.C = j.at("C").get<double>();
  sc.tol = j.at("tol").get<double>();
  sc.loss = loss_from_string(j.at("loss").get<std::string>());
  sc.penalty = penalty_from_string(j.at("penalty").get<std::string>());
  sc.dual = j.at("dual").get<bool>();
  sc.multi_class = multi_class_from_string(j.at("multi_class").get<std::string>());
  sc.max_iter = j.at("max_iter").get<int>();
  sc.fit_intercept = j.at("fit_intercept").get<bool>();
  sc.intercept_scaling = j.at("intercept_scaling").get<double>();
  if (j.contains("class_weights")) {
    sc.class_weights = j.at("class_weights").get<std::vector<double>>();
  }
  sc.validate();
  return sc;
}

}  // namespace

void write_model_json(std::ostream& out, const ModelBundle& bundle) {
  const LinearModel& m = bundle.model;
  json j;
  j["format_version"] = kFormatVersion;
  j["scenario"] = scenario_to_json(m.scenario);
  j["classes"] = m.classes;

  if (m.is_multiclass()) {
    json rows = json::array();
    for (Index k = 0; k < m.weights.rows(); ++k) {
      std::vector<double> row(m.weights.row(k).begin(), m.weights.row(k).end());
      rows.push_back(row);
    }
    j["weights_per_class"] = rows;
  } else {
    j["weights"] = std::vector<double>(m.weights.row(0).begin(), m.weights.row(0).end());
  }
  j["intercepts"] = std::vector<double>(m.intercepts.begin(), m.intercepts.end());
  j["diagnostics"] = {{"iterations", m.diagnostics.iterations},
                      {"final_objective", m.diagnostics.final_objective},
                      {"max_kkt_violation", m.diagnostics.max_kkt_violation},
                      {"converged", m.diagnostics.converged},
                      {"shuffle_seed", m.diagnostics.shuffle_seed}};

  if (bundle.lbp) {
    j["lbp"] = {{"points", bundle.lbp->points}, {"radius", bundle.lbp->radius}};
  }
  if (!bundle.positive_label.empty() || !bundle.negative_label.empty()) {
    j["labels"] = {{"positive", bundle.positive_label}, {"negative", bundle.negative_label}};
  }
  if (bundle.scenario_id) j["scenario_id"] = *bundle.scenario_id;

  out << j.dump(2) << '\n';
}

void write_model_json(const fs::path& path, const ModelBundle& bundle) {
  std::ofstream out(path);
  if (!out) throw IoError("model: cannot open '" + path.string() + "' for writing");
  write_model_json(out, bundle);
  if (!out.good()) throw IoError("model: write to '" + path.string() + "' failed");
}

ModelBundle read_model_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("model: malformed JSON: ") + e.what());
  }

  ModelBundle bundle;
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw InvalidInputError("model: unsupported format_version");
    }
    LinearModel& m = bundle.model;
    m.scenario = scenario_from_json(j.at("scenario"));
    m.classes = j.at("classes").get<std::vector<int>>();

    if (m.scenario.multi_class == MultiClass::kCrammerSinger) {
      const auto rows = j.at("weights_per_class").get<std::vector<std::vector<double>>>();
      if (rows.empty() || rows.size() != m.classes.size()) {
        throw InvalidInputError("model: weights_per_class does not match classes");
      }
      m.weights.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].size() != rows[0].size()) {
          throw InvalidInputError("model: ragged weights_per_class");
        }
        for (std::size_t d = 0; d < rows[k].size(); ++d) {
          m.weights(static_cast<Index>(k), static_cast<Index>(d)) = rows[k][d];
        }
      }
    } else {
      const auto w = j.at("weights").get<std::vector<double>>();
      if (m.classes.size() != 2) throw InvalidInputError("model: binary model needs 2 classes");
      m.weights.resize(1, static_cast<Index>(w.size()));
      for (std::size_t d = 0; d < w.size(); ++d) m.weights(0, static_cast<Index>(d)) = w[d];
    }

    const auto ic = j.at("intercepts").get<std::vector<double>>();
    if (ic.size() != static_cast<std::size_t>(m.weights.rows())) {
      throw InvalidInputError("model: intercept count does not match weight rows");
    }
    m.intercepts.resize(static_cast<Index>(ic.size()));
    for (std::size_t k = 0; k < ic.size(); ++k) m.intercepts[static_cast<Index>(k)] = ic[k];

    const json& d = j.at("diagnostics");
    m.diagnostics.iterations = d.at("iterations").get<int>();
    m.diagnostics.final_objective = d.at("final_objective").get<double>();
    m.diagnostics.max_kkt_violation = d.at("max_kkt_violation").get<double>();
    m.diagnostics.converged = d.at("converged").get<bool>();
    if (d.contains("shuffle_seed")) {
      m.diagnostics.shuffle_seed = d.at("shuffle_seed").get<std::uint64_t>();
    }

    if (j.contains("lbp")) {
      LbpParams params;
      params.points = j.at("lbp").at("points").get<int>();
      params.radius = j.at("lbp").at("radius").get<double>();
      params.validate();
      bundle.lbp = params;
    }
    if (j.contains("labels")) {
      bundle.positive_label = j.at("labels").at("positive").get<std::string>();
      bundle.negative_label = j.at("labels").at("negative").get<std::string>();
    }
    if (j.contains("scenario_id")) bundle.scenario_id = j.at("scenario_id").get<int>();
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("model: missing or mistyped field: ") + e.what());
  }
  return bundle;
}

ModelBundle read_model_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("model: cannot open '" + path.string() + "'");
  return read_model_json(in);
}

std::string scenario_to_json_text(const SvmScenario& scenario) {
  return scenario_to_json(scenario).dump(2);
}

SvmScenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: malformed JSON: ") + e.what());
  }
  SvmScenario sc;
  try {
    sc.C = j.value("C", sc.C);
    sc.tol = j.value("tol", sc.tol);
    if (j.contains("loss")) sc.loss = loss_from_string(j.at("loss").get<std::string>());
    if (j.contains("penalty")) sc.penalty = penalty_from_string(j.at("penalty").get<std::string>());
    sc.dual = j.value("dual", sc.dual);
    if (j.contains("multi_class")) {
      sc.multi_class = multi_class_from_string(j.at("multi_class").get<std::string>());
    }
    sc.max_iter = j.value("max_iter", sc.max_iter);
    sc.fit_intercept = j.value("fit_intercept", sc.fit_intercept);
    sc.intercept_scaling = j.value("intercept_scaling", sc.intercept_scaling);
    if (j.contains("class_weights")) {
      sc.class_weights = j.at("class_weights").get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: mistyped field: ") + e.what());
  }
  sc.validate();
  return sc;
}

}  // namespace motoclass
