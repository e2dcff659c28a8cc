#include "motoclass/feature_io.hpp"
#include "motoclass/harness.hpp"
#include "motoclass/image_io.hpp"
#include "motoclass/lbp.hpp"
#include "motoclass/manifest.hpp"
#include "motoclass/mesh.hpp"
#include "motoclass/metrics.hpp"
#include "motoclass/model_io.hpp"
#include "motoclass/svm.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace motoclass;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Optional overrides read from the --config JSON file; flags win over it.
struct RunConfig {
  std::optional<std::uint64_t> master_seed;
  std::optional<int> samples;
  std::optional<Index> per_class_size, train_per_class, test_per_class;
  std::optional<LbpParams> lbp;
  std::optional<std::vector<SvmScenario>> scenarios;
  std::optional<std::string> positive_label;
};

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }

  static const std::set<std::string> known{"master_seed",     "samples",
                                           "per_class_size",  "train_per_class",
                                           "test_per_class",  "lbp",
                                           "scenarios",       "positive_label"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  }

  RunConfig cfg;
  try {
    if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
    if (j.contains("per_class_size")) cfg.per_class_size = j.at("per_class_size").get<Index>();
    if (j.contains("train_per_class")) cfg.train_per_class = j.at("train_per_class").get<Index>();
    if (j.contains("test_per_class")) cfg.test_per_class = j.at("test_per_class").get<Index>();
    if (j.contains("lbp")) {
      LbpParams params;
      params.points = j.at("lbp").value("points", params.points);
      params.radius = j.at("lbp").value("radius", params.radius);
      params.validate();
      cfg.lbp = params;
    }
    if (j.contains("scenarios")) {
      const json& s = j.at("scenarios");
      if (s.is_string() && s.get<std::string>() == "paper20") {
        cfg.scenarios = scenario_table();
      } else if (s.is_array()) {
        std::vector<SvmScenario> list;
        for (const auto& elem : s) list.push_back(scenario_from_json_text(elem.dump()));
        if (list.empty()) throw ConfigError("config: scenario list is empty");
        cfg.scenarios = std::move(list);
      } else {
        throw ConfigError("config: scenarios must be \"paper20\" or a list of objects");
      }
    }
    if (j.contains("positive_label")) {
      cfg.positive_label = j.at("positive_label").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: mistyped field: ") + e.what());
  }
  return cfg;
}

FeaturePool compute_features(const DatasetManifest& manifest, const fs::path& base_dir,
                             const LbpParams& params) {
  manifest.validate(false);
  if (manifest.entries.empty()) throw InvalidInputError("featurize: manifest has no entries");
  params.validate();

  FeaturePool pool;
  pool.lbp = params;
  pool.features.resize(static_cast<Index>(manifest.entries.size()), params.bins());
  pool.labels.reserve(manifest.entries.size());

  std::vector<std::string> bad;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& entry = manifest.entries[i];
    GrayImage img;
    try {
      img = read_image_gray(resolve_entry_path(base_dir, entry));
    } catch (const Error&) {
      bad.push_back(entry.path);
      continue;
    }
    pool.features.row(static_cast<Index>(i)) = lbp_feature(img, params).values;
    pool.labels.push_back(entry.label);
  }
  if (!bad.empty()) {
    std::string msg = "featurize: " + std::to_string(bad.size()) + " undecodable image(s):";
    for (const auto& p : bad) msg += "\n  " + p;
    throw IoError(msg);
  }
  return pool;
}

/// Resolves the data source shared by sweep/train/evaluate: a precomputed
/// feature file, a manifest, or a class-per-directory dataset.
FeaturePool load_pool(const std::string& features_path, const std::string& manifest_path,
                      const std::string& dataset_dir, const LbpParams& params,
                      bool params_explicit) {
  const int sources = !features_path.empty() + !manifest_path.empty() + !dataset_dir.empty();
  if (sources != 1) {
    throw ConfigError("expected exactly one of --features, --manifest, --dataset");
  }
  if (!features_path.empty()) {
    FeaturePool pool = read_features_csv(features_path);
    if (params_explicit &&
        (pool.lbp.points != params.points || pool.lbp.radius != params.radius)) {
      throw ConfigError("feature file '" + features_path + "' was computed with points=" +
                        std::to_string(pool.lbp.points) + ", radius=" +
                        std::to_string(pool.lbp.radius) + "; refusing the mismatched request");
    }
    return pool;
  }
  if (!manifest_path.empty()) {
    const fs::path p(manifest_path);
    return compute_features(read_manifest_csv(p), p.parent_path(), params);
  }
  return compute_features(build_manifest(dataset_dir), dataset_dir, params);
}

struct ExtractArgs {
  std::string frames_dir;
  MeshSpec mesh;
  std::string label = "unlabeled";
};

int run_extract(const ExtractArgs& args, const fs::path& out_dir) {
  args.mesh.validate();
  if (fs::exists(out_dir) && !fs::is_empty(out_dir)) {
    throw InvalidInputError("extract: output directory '" + out_dir.string() +
                            "' already exists and is not empty");
  }

  std::vector<fs::path> frames;
  if (!fs::is_directory(args.frames_dir)) {
    throw InvalidInputError("extract: '" + args.frames_dir + "' is not a directory");
  }
  for (const auto& entry : fs::directory_iterator(args.frames_dir)) {
    if (entry.is_regular_file() && is_supported_image(entry.path())) {
      frames.push_back(entry.path());
    }
  }
  if (frames.empty()) {
    throw InvalidInputError("extract: no decodable frames in '" + args.frames_dir + "'");
  }
  std::sort(frames.begin(), frames.end());

  const fs::path tmp_dir = out_dir.string() + ".tmp";
  fs::remove_all(tmp_dir);
  fs::create_directories(tmp_dir);
  try {
    DatasetManifest manifest;
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
      const GrayImage frame = read_image_gray(frames[fi]);
      args.mesh.validate_for_frame(frame.cols(), frame.rows());
      const std::string stem = frames[fi].stem().string();
      for (Index r = 0; r < args.mesh.rows; ++r) {
        for (Index c = 0; c < args.mesh.cols; ++c) {
          const std::string name =
              stem + "_r" + std::to_string(r) + "_c" + std::to_string(c) + ".png";
          write_png_gray(tmp_dir / name, extract_cell(frame, args.mesh, r, c));
          ManifestEntry e;
          e.path = name;
          e.label = args.label;
          e.source_id = stem;
          e.frame_index = static_cast<std::int64_t>(fi);
          e.cell_row = r;
          e.cell_col = c;
          manifest.entries.push_back(std::move(e));
        }
      }
    }
    write_manifest_csv(manifest, tmp_dir / "manifest.csv");
  } catch (...) {
    fs::remove_all(tmp_dir);
    throw;
  }
  fs::remove_all(out_dir);
  fs::rename(tmp_dir, out_dir);
  std::cout << "extract: " << frames.size() << " frame(s) -> "
            << frames.size() * static_cast<std::size_t>(args.mesh.cell_count())
            << " cells in " << out_dir.string() << "\n";
  return 0;
}

void require_dir(const fs::path& out_dir) {
  fs::create_directories(out_dir);
}

int run_featurize(const std::string& manifest_path, const std::string& dataset_dir,
                  const LbpParams& params, const fs::path& out_dir) {
  FeaturePool pool;
  if (!manifest_path.empty() == !dataset_dir.empty()) {
    throw ConfigError("featurize: expected exactly one of --manifest, --dataset");
  }
  if (!manifest_path.empty()) {
    const fs::path p(manifest_path);
    pool = compute_features(read_manifest_csv(p), p.parent_path(), params);
  } else {
    pool = compute_features(build_manifest(dataset_dir), dataset_dir, params);
  }
  require_dir(out_dir);
  write_features_csv(out_dir / "features.csv", pool, /*full_precision=*/false);
  std::cout << "featurize: " << pool.features.rows() << " rows x " << pool.features.cols()
            << " features -> " << (out_dir / "features.csv").string() << "\n";
  return 0;
}

struct SweepArgs {
  std::string features, manifest, dataset;
  HarnessConfig harness;
  bool lbp_explicit = false;
};

int run_sweep_cmd(const SweepArgs& args, const fs::path& out_dir) {
  args.harness.validate();
  const FeaturePool pool =
      load_pool(args.features, args.manifest, args.dataset, args.harness.lbp, args.lbp_explicit);

  HarnessConfig config = args.harness;
  config.lbp = pool.lbp;
  const auto samples = build_sample_features(pool, config);
  const SweepReport report = run_sweep(samples, config.scenarios, config.master_seed);

  require_dir(out_dir);
  const auto write_file = [&](const char* name, auto&& writer) {
    std::ofstream out(out_dir / name);
    if (!out) throw IoError(std::string("sweep: cannot open '") + name + "' for writing");
    writer(out);
  };
  write_file("records.csv",
             [&](std::ostream& o) { write_records_csv(o, report, config.master_seed); });
  write_file("table3.csv",
             [&](std::ostream& o) { write_table3_csv(o, report, config.master_seed); });
  write_file("table4.csv",
             [&](std::ostream& o) { write_table4_csv(o, report, config.master_seed); });
  write_file("summary.txt",
             [&](std::ostream& o) { write_summary(o, report, config.master_seed, true); });

  const int best = report.best_scenario_id();
  std::cout << "sweep: " << report.records.size() << " records; best scenario S" << best
            << " (mean auc " << fmt(report.per_scenario[static_cast<std::size_t>(best)].mean_auc)
            << ") -> " << out_dir.string() << "\n";
  return 0;
}

struct TrainArgs {
  std::string features, manifest, dataset;
  LbpParams lbp;
  bool lbp_explicit = false;
  std::optional<int> scenario_id;
  SvmScenario scenario;
  std::string positive_label;
  std::uint64_t seed = 0;
};

/// Binary pool -> TrainingSet + label names; CS scenarios use indices {0,1}.
TrainingSet pool_training_set(const FeaturePool& pool, const std::string& positive,
                              MultiClass mc) {
  TrainingSet data;
  data.features = pool.features;
  data.labels.resize(static_cast<Index>(pool.labels.size()));
  for (Index i = 0; i < data.labels.size(); ++i) {
    const bool pos = pool.labels[static_cast<std::size_t>(i)] == positive;
    data.labels[i] = mc == MultiClass::kCrammerSinger ? (pos ? 1 : 0) : (pos ? 1 : -1);
  }
  return data;
}

std::string negative_label_of(const FeaturePool& pool, const std::string& positive) {
  for (const auto& l : pool.labels) {
    if (l != positive) return l;
  }
  return "";
}

int run_train(const TrainArgs& args, const fs::path& out_dir) {
  const FeaturePool pool =
      load_pool(args.features, args.manifest, args.dataset, args.lbp, args.lbp_explicit);
  const std::string positive = resolve_positive_label(pool.labels, args.positive_label);

  SvmScenario scenario = args.scenario;
  if (args.scenario_id) {
    const auto table = scenario_table();
    if (*args.scenario_id < 0 || *args.scenario_id >= static_cast<int>(table.size())) {
      throw ConfigError("train: scenario id must lie in [0, " +
                        std::to_string(table.size() - 1) + "]");
    }
    scenario = table[static_cast<std::size_t>(*args.scenario_id)];
  }
  scenario.validate();

  TrainOptions options;
  options.seed = args.seed;
  const TrainingSet data = pool_training_set(pool, positive, scenario.multi_class);
  const LinearModel model = train(data, scenario, options);

  ModelBundle bundle;
  bundle.model = model;
  bundle.lbp = pool.lbp;
  bundle.positive_label = positive;
  bundle.negative_label = negative_label_of(pool, positive);
  bundle.scenario_id = args.scenario_id;

  require_dir(out_dir);
  write_model_json(out_dir / "model.json", bundle);
  std::cout << "train: " << data.size() << " examples, converged="
            << (model.diagnostics.converged ? "true" : "false")
            << ", objective=" << fmt(model.diagnostics.final_objective) << " -> "
            << (out_dir / "model.json").string() << "\n";
  return 0;
}

void check_lbp_match(const ModelBundle& bundle, const LbpParams& pool_params) {
  if (!bundle.lbp) return;
  if (bundle.lbp->points != pool_params.points || bundle.lbp->radius != pool_params.radius) {
    throw ConfigError("model expects lbp points=" + std::to_string(bundle.lbp->points) +
                      ", radius=" + std::to_string(bundle.lbp->radius) +
                      "; the input was computed with points=" +
                      std::to_string(pool_params.points) + ", radius=" +
                      std::to_string(pool_params.radius));
  }
}

int run_evaluate(const std::string& model_path, const std::string& features,
                 const std::string& manifest, const std::string& dataset,
                 const std::string& positive_flag, const fs::path& out_dir) {
  const ModelBundle bundle = read_model_json(model_path);
  const LbpParams params = bundle.lbp.value_or(LbpParams{});
  const FeaturePool pool = load_pool(features, manifest, dataset, params, bundle.lbp.has_value());
  check_lbp_match(bundle, pool.lbp);

  const std::string positive = !positive_flag.empty()
                                   ? resolve_positive_label(pool.labels, positive_flag)
                                   : (!bundle.positive_label.empty()
                                          ? resolve_positive_label(pool.labels,
                                                                   bundle.positive_label)
                                          : resolve_positive_label(pool.labels, ""));

  const bool cs = bundle.model.is_multiclass();
  std::vector<LabeledPrediction> labeled;
  std::vector<ScoredPrediction> scored;
  for (Index i = 0; i < pool.features.rows(); ++i) {
    const Eigen::VectorXd x = pool.features.row(i).transpose();
    const bool truth = pool.labels[static_cast<std::size_t>(i)] == positive;
    double score;
    bool predicted;
    if (cs) {
      const Eigen::VectorXd s = decision_function(bundle.model, x);
      score = s.size() == 2 ? s[1] - s[0] : s.maxCoeff();
      predicted = predict(bundle.model, x) == 1;
    } else {
      score = decision_value(bundle.model, x);
      predicted = score > 0;
    }
    labeled.push_back({predicted, truth});
    scored.push_back({score, truth});
  }

  const ContingencyTable t = contingency(labeled);
  const Rates r = rates(t);
  const double auc = roc_auc(scored);

  require_dir(out_dir);
  {
    std::ofstream out(out_dir / "metrics.csv");
    if (!out) throw IoError("evaluate: cannot open metrics.csv for writing");
    out << "tp,fp,fn,tn,tpr,fpr,tnr,precision,accuracy,auc\n";
    out << fmt(t.tp) << ',' << fmt(t.fp) << ',' << fmt(t.fn) << ',' << fmt(t.tn) << ','
        << fmt(r.tpr) << ',' << fmt(r.fpr) << ',' << fmt(r.tnr) << ','
        << (r.precision ? fmt(*r.precision) : std::string()) << ',' << fmt(r.accuracy) << ','
        << fmt(auc) << '\n';
  }
  std::cout << "evaluate: tpr=" << fmt(r.tpr) << " fpr=" << fmt(r.fpr)
            << " accuracy=" << fmt(r.accuracy) << " auc=" << fmt(auc) << " -> "
            << (out_dir / "metrics.csv").string() << "\n";
  return 0;
}

int run_predict(const std::string& model_path, const std::string& image_path,
                const std::string& values) {
  const ModelBundle bundle = read_model_json(model_path);
  if (image_path.empty() == values.empty()) {
    throw ConfigError("predict: expected exactly one of --image, --values");
  }

  Eigen::VectorXd x;
  if (!image_path.empty()) {
    if (!bundle.lbp) {
      throw ConfigError("predict: model has no extraction parameters; pass --values instead");
    }
    x = lbp_feature(read_image_gray(image_path), *bundle.lbp).values;
  } else {
    std::vector<double> parsed;
    std::stringstream ss(values);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        parsed.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw InvalidInputError("predict: malformed number '" + cell + "' in --values");
      }
    }
    x = Eigen::Map<Eigen::VectorXd>(parsed.data(), static_cast<Index>(parsed.size()));
  }

  const int predicted = predict(bundle.model, x);
  std::string label;
  double score;
  if (bundle.model.is_multiclass()) {
    const Eigen::VectorXd s = decision_function(bundle.model, x);
    score = s.size() == 2 ? s[1] - s[0] : s.maxCoeff();
    if (!bundle.positive_label.empty() && s.size() == 2) {
      label = predicted == 1 ? bundle.positive_label : bundle.negative_label;
    } else {
      label = std::to_string(predicted);
    }
  } else {
    score = decision_value(bundle.model, x);
    if (!bundle.positive_label.empty()) {
      label = predicted > 0 ? bundle.positive_label : bundle.negative_label;
    } else {
      label = predicted > 0 ? "+1" : "-1";
    }
  }
  std::cout << "label=" << label << " score=" << fmt(score) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mesh extraction, texture features, linear SVM sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out = ".";
  app.add_option("--config", config_path, "JSON run config; flags override its values")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (default 0)");
  app.add_option("--out", out, "output directory (default .)");

  ExtractArgs extract_args;
  auto* cmd_extract = app.add_subcommand("extract", "split frames into mesh cell images");
  cmd_extract->add_option("--frames", extract_args.frames_dir, "directory of frame images")
      ->required();
  cmd_extract->add_option("--cell-width", extract_args.mesh.cell_width, "cell width, default 210");
  cmd_extract->add_option("--cell-height", extract_args.mesh.cell_height,
                          "cell height, default 120");
  cmd_extract->add_option("--rows", extract_args.mesh.rows, "grid rows, default 3");
  cmd_extract->add_option("--cols", extract_args.mesh.cols, "grid cols, default 8");
  cmd_extract->add_option("--origin-x", extract_args.mesh.origin_x, "grid origin x, default 0");
  cmd_extract->add_option("--origin-y", extract_args.mesh.origin_y, "grid origin y, default 0");
  cmd_extract->add_option("--label", extract_args.label,
                          "label recorded in the manifest, default 'unlabeled'");

  std::string fz_manifest, fz_dataset;
  LbpParams lbp_flags;
  auto* cmd_featurize = app.add_subcommand("featurize", "compute texture histogram features");
  cmd_featurize->add_option("--manifest", fz_manifest, "manifest CSV to featurize");
  cmd_featurize->add_option("--dataset", fz_dataset, "class-per-directory dataset to featurize");
  auto* opt_points = cmd_featurize->add_option("--points", lbp_flags.points,
                                               "circular neighbors, default 24");
  auto* opt_radius = cmd_featurize->add_option("--radius", lbp_flags.radius,
                                               "circle radius, default 3");

  SweepArgs sweep_args;
  auto* cmd_sweep = app.add_subcommand("sweep", "run the full scenario-by-sample sweep");
  cmd_sweep->add_option("--features", sweep_args.features, "precomputed feature CSV");
  cmd_sweep->add_option("--manifest", sweep_args.manifest, "manifest CSV");
  cmd_sweep->add_option("--dataset", sweep_args.dataset, "class-per-directory dataset");
  cmd_sweep->add_option("--samples", sweep_args.harness.samples, "bootstrap samples, default 5");
  cmd_sweep->add_option("--per-class", sweep_args.harness.per_class_size,
                        "sample size per class, default 721");
  cmd_sweep->add_option("--train-per-class", sweep_args.harness.train_per_class,
                        "training rows per class, default 505");
  cmd_sweep->add_option("--test-per-class", sweep_args.harness.test_per_class,
                        "test rows per class, default 216");
  auto* sw_points = cmd_sweep->add_option("--points", sweep_args.harness.lbp.points,
                                          "circular neighbors, default 24");
  auto* sw_radius = cmd_sweep->add_option("--radius", sweep_args.harness.lbp.radius,
                                          "circle radius, default 3");
  cmd_sweep->add_option("--positive-label", sweep_args.harness.positive_label,
                        "positive class label; default: lexicographically first");

  TrainArgs train_args;
  auto* cmd_train = app.add_subcommand("train", "train one model on a whole feature pool");
  cmd_train->add_option("--features", train_args.features, "precomputed feature CSV");
  cmd_train->add_option("--manifest", train_args.manifest, "manifest CSV");
  cmd_train->add_option("--dataset", train_args.dataset, "class-per-directory dataset");
  auto* tr_points = cmd_train->add_option("--points", train_args.lbp.points,
                                          "circular neighbors, default 24");
  auto* tr_radius = cmd_train->add_option("--radius", train_args.lbp.radius,
                                          "circle radius, default 3");
  int scenario_id_flag = -1;
  auto* opt_scenario_id = cmd_train->add_option(
      "--scenario-id", scenario_id_flag, "row of the standard 20-scenario table (0..19)");
  cmd_train->add_option("--svm-c", train_args.scenario.C, "penalty C, default 1");
  cmd_train->add_option("--tol", train_args.scenario.tol, "stopping tolerance, default 1e-4");
  std::string loss_flag = "squared_hinge", penalty_flag = "l2", mc_flag = "ovr";
  cmd_train->add_option("--loss", loss_flag, "hinge | squared_hinge");
  cmd_train->add_option("--penalty", penalty_flag, "l1 | l2");
  cmd_train->add_flag("--dual,!--no-dual", train_args.scenario.dual,
                      "solve the dual formulation (default)");
  cmd_train->add_option("--multi-class", mc_flag, "ovr | crammer_singer");
  cmd_train->add_option("--max-iter", train_args.scenario.max_iter,
                        "iteration cap, default 1000");
  cmd_train->add_flag("--fit-intercept,!--no-fit-intercept", train_args.scenario.fit_intercept,
                      "learn an intercept (default)");
  cmd_train->add_option("--intercept-scaling", train_args.scenario.intercept_scaling,
                        "constant-column magnitude, default 1");
  cmd_train->add_option("--positive-label", train_args.positive_label,
                        "positive class label; default: lexicographically first");

  std::string ev_model, ev_features, ev_manifest, ev_dataset, ev_positive;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "score a model on labeled data");
  cmd_evaluate->add_option("--model", ev_model, "model JSON")->required();
  cmd_evaluate->add_option("--features", ev_features, "precomputed feature CSV");
  cmd_evaluate->add_option("--manifest", ev_manifest, "manifest CSV");
  cmd_evaluate->add_option("--dataset", ev_dataset, "class-per-directory dataset");
  cmd_evaluate->add_option("--positive-label", ev_positive,
                           "positive class label; default: the model's recorded label");

  std::string pr_model, pr_image, pr_values;
  auto* cmd_predict = app.add_subcommand("predict", "classify one image or feature row");
  cmd_predict->add_option("--model", pr_model, "model JSON")->required();
  cmd_predict->add_option("--image", pr_image, "image to classify");
  cmd_predict->add_option("--values", pr_values, "comma-separated feature row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_run_config(config_path);
    const bool seed_given = app.count("--seed") > 0;
    const std::uint64_t master_seed =
        seed_given ? seed : cfg.master_seed.value_or(seed);

    if (cmd_extract->parsed()) return run_extract(extract_args, out);

    if (cmd_featurize->parsed()) {
      LbpParams params = cfg.lbp.value_or(LbpParams{});
      if (opt_points->count()) params.points = lbp_flags.points;
      if (opt_radius->count()) params.radius = lbp_flags.radius;
      return run_featurize(fz_manifest, fz_dataset, params, out);
    }

    if (cmd_sweep->parsed()) {
      SweepArgs args = sweep_args;
      args.harness.master_seed = master_seed;
      if (!cmd_sweep->count("--samples") && cfg.samples) args.harness.samples = *cfg.samples;
      if (!cmd_sweep->count("--per-class") && cfg.per_class_size) {
        args.harness.per_class_size = *cfg.per_class_size;
      }
      if (!cmd_sweep->count("--train-per-class") && cfg.train_per_class) {
        args.harness.train_per_class = *cfg.train_per_class;
      }
      if (!cmd_sweep->count("--test-per-class") && cfg.test_per_class) {
        args.harness.test_per_class = *cfg.test_per_class;
      }
      if (cfg.lbp && !sw_points->count() && !sw_radius->count()) {
        args.harness.lbp = *cfg.lbp;
        args.lbp_explicit = true;
      } else {
        args.lbp_explicit = sw_points->count() || sw_radius->count();
      }
      if (cfg.scenarios) args.harness.scenarios = *cfg.scenarios;
      if (!cmd_sweep->count("--positive-label") && cfg.positive_label) {
        args.harness.positive_label = *cfg.positive_label;
      }
      return run_sweep_cmd(args, out);
    }

    if (cmd_train->parsed()) {
      TrainArgs args = train_args;
      args.seed = master_seed;
      args.scenario.loss = loss_from_string(loss_flag);
      args.scenario.penalty = penalty_from_string(penalty_flag);
      args.scenario.multi_class = multi_class_from_string(mc_flag);
      if (opt_scenario_id->count()) {
        const std::vector<std::string> scenario_flags{
            "--svm-c", "--tol", "--loss", "--penalty", "--dual", "--multi-class",
            "--max-iter", "--fit-intercept", "--intercept-scaling"};
        for (const auto& f : scenario_flags) {
          if (cmd_train->count(f)) {
            throw ConfigError("train: --scenario-id conflicts with " + f);
          }
        }
        args.scenario_id = scenario_id_flag;
      }
      if (cfg.lbp && !tr_points->count() && !tr_radius->count()) {
        args.lbp = *cfg.lbp;
        args.lbp_explicit = true;
      } else {
        args.lbp_explicit = tr_points->count() || tr_radius->count();
      }
      if (args.positive_label.empty() && cfg.positive_label) {
        args.positive_label = *cfg.positive_label;
      }
      return run_train(args, out);
    }

    if (cmd_evaluate->parsed()) {
      return run_evaluate(ev_model, ev_features, ev_manifest, ev_dataset, ev_positive, out);
    }
    if (cmd_predict->parsed()) return run_predict(pr_model, pr_image, pr_values);
    return 2;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
