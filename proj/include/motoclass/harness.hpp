#pragma once

#include "motoclass/feature_io.hpp"
#include "motoclass/lbp.hpp"
#include "motoclass/manifest.hpp"
#include "motoclass/metrics.hpp"
#include "motoclass/svm.hpp"
#include "motoclass/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace motoclass {

/// One class-balanced bootstrap sample and its stratified 70/30 split.
/// Defaults mirror the experimental design: 721 per class, 505 train and
/// 216 test per class.
struct SampleSpec {
  int sample_id = 1;
  Index per_class_size = 721;
  Index train_per_class = 505;
  Index test_per_class = 216;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless sizes are positive and
  /// train_per_class + test_per_class == per_class_size.
  void validate() const;
};

/// The 20 calibration scenarios S0..S19: the cross product of
/// C in {1,150} and tol in {1e-4,1e-2} with five structural variants
/// (defaults; crammer_singer; hinge; dual=false; l1+dual=false).
std::vector<SvmScenario> scenario_table();

/// Row indices into the pool, one list per class, each per_class_size long.
/// Negative rows may repeat (drawn with replacement).
struct DrawnSample {
  std::vector<Index> positive_rows;
  std::vector<Index> negative_rows;
};

/// Draws one balanced sample. The positive class is taken whole when its
/// pool has exactly per_class_size entries (uniform without replacement when
/// larger); the negative class is drawn with replacement from its full pool.
/// Fully determined by spec.seed.
DrawnSample draw_sample(std::span<const std::string> row_labels, const SampleSpec& spec,
                        const std::string& positive_label);
DrawnSample draw_sample(const DatasetManifest& pool, const SampleSpec& spec,
                        const std::string& positive_label);

/// Stratified split of a drawn sample: exactly train_per_class of each class
/// in train, test_per_class in test, disjoint by sample position, ordered by
/// a seed-determined permutation. Labels are +1 for positives, -1 for
/// negatives, aligned with the row lists.
struct SampleSplit {
  std::vector<Index> train_rows;
  std::vector<Index> test_rows;
  std::vector<int> train_labels;
  std::vector<int> test_labels;
};
SampleSplit split(const DrawnSample& sample, const SampleSpec& spec);

/// Materialized train/test matrices for one sample.
struct SampleFeatures {
  int sample_id = 0;
  Eigen::MatrixXd train_x, test_x;
  Eigen::VectorXi train_y, test_y;  // +1 / -1
};

/// Sweep configuration; seeds for drawing, splitting and training are all
/// derived from master_seed (see rng.hpp).
struct HarnessConfig {
  std::uint64_t master_seed = 0;
  int samples = 5;
  Index per_class_size = 721;
  Index train_per_class = 505;
  Index test_per_class = 216;
  LbpParams lbp;
  std::vector<SvmScenario> scenarios = scenario_table();
  /// Empty selects the lexicographically first class label.
  std::string positive_label;

  void validate() const;
};

/// Chooses the positive label: the configured one (must exist) or the
/// lexicographically first of the pool's two classes.
std::string resolve_positive_label(std::span<const std::string> row_labels,
                                   const std::string& configured);

/// Draws and splits every sample of the run and gathers feature rows.
std::vector<SampleFeatures> build_sample_features(const FeaturePool& pool,
                                                  const HarnessConfig& config);

/// One (scenario, sample) evaluation.
struct MetricsRecord {
  int scenario_id = 0;
  int sample_id = 0;
  double tp = 0, fp = 0, fn = 0, tn = 0;
  double tpr = 0, fpr = 0, tnr = 0;
  std::optional<double> precision;
  double accuracy = 0;
  double auc = 0;
};

/// Arithmetic means over samples for one scenario.
struct ScenarioAggregate {
  int scenario_id = 0;
  double mean_tpr = 0, mean_fpr = 0, mean_tnr = 0;
  std::optional<double> mean_precision;
  double mean_accuracy = 0;
  double mean_auc = 0;
};

struct SweepReport {
  std::vector<SvmScenario> scenarios;
  int samples = 0;
  std::vector<MetricsRecord> records;            // scenarios x samples
  std::vector<ScenarioAggregate> per_scenario;   // one per scenario
  std::vector<double> sample_max_auc;            // one per sample
  std::vector<double> sample_min_auc;

  /// Best scenario id by mean AUC; ties broken by lower mean FPR, then
  /// lower scenario id.
  int best_scenario_id() const;
};

/// Trains one model per (scenario, sample) cell, scores the test split and
/// aggregates. Training seeds derive from master_seed and the sample id
/// only, so scenarios that define the same optimization problem produce
/// identical models. A failing cell aborts with the (scenario, sample) pair
/// named in the error.
SweepReport run_sweep(std::span<const SampleFeatures> samples,
                      std::span<const SvmScenario> scenarios, std::uint64_t master_seed);

// Report files. Every writer emits a `# master_seed=...` comment line, then
// a CSV header row; floats use 6 significant digits.
void write_records_csv(std::ostream& out, const SweepReport& report, std::uint64_t master_seed);
void write_table3_csv(std::ostream& out, const SweepReport& report, std::uint64_t master_seed);
void write_table4_csv(std::ostream& out, const SweepReport& report, std::uint64_t master_seed);
/// Human-readable run summary naming the best scenario. The optional
/// timestamp is the only non-reproducible output of a run.
void write_summary(std::ostream& out, const SweepReport& report, std::uint64_t master_seed,
                   bool with_timestamp = true);

}  // namespace motoclass
