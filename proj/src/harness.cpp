#include "motoclass/harness.hpp"

#include "csv.hpp"
#include "motoclass/rng.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <ostream>
#include <set>

namespace motoclass {

void SampleSpec::validate() const {
  if (sample_id < 1) throw ConfigError("sample: sample_id must be >= 1");
  if (per_class_size <= 0 || train_per_class <= 0 || test_per_class <= 0) {
    throw ConfigError("sample: sizes must be positive");
  }
  if (train_per_class + test_per_class != per_class_size) {
    throw ConfigError("sample: train " + std::to_string(train_per_class) + " + test " +
                      std::to_string(test_per_class) + " != per-class size " +
                      std::to_string(per_class_size));
  }
}

std::vector<SvmScenario> scenario_table() {
  std::vector<SvmScenario> table;
  table.reserve(20);
  for (double tol : {1e-4, 1e-2}) {
    for (double c : {1.0, 150.0}) {
      for (int variant = 0; variant < 5; ++variant) {
        SvmScenario sc;
        sc.C = c;
        sc.tol = tol;
        switch (variant) {
          case 1:
            sc.multi_class = MultiClass::kCrammerSinger;
            break;
          case 2:
            sc.loss = Loss::kHinge;
            break;
          case 3:
            sc.dual = false;
            break;
          case 4:
            sc.penalty = Penalty::kL1;
            sc.dual = false;
            break;
          default:
            break;
        }
        table.push_back(sc);
      }
    }
  }
  return table;
}

DrawnSample draw_sample(std::span<const std::string> row_labels, const SampleSpec& spec,
                        const std::string& positive_label) {
  spec.validate();
  std::vector<Index> pos_pool, neg_pool;
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    (row_labels[i] == positive_label ? pos_pool : neg_pool).push_back(static_cast<Index>(i));
  }
  if (pos_pool.empty()) {
    throw InvalidInputError("sample: no entries labeled '" + positive_label + "'");
  }
  if (static_cast<Index>(pos_pool.size()) < spec.per_class_size) {
    throw InvalidInputError("sample: positive pool of " + std::to_string(pos_pool.size()) +
                            " cannot fill " + std::to_string(spec.per_class_size) + " slots");
  }
  if (neg_pool.empty()) throw InvalidInputError("sample: negative pool is empty");

  Rng rng(spec.seed);
  DrawnSample out;
  if (static_cast<Index>(pos_pool.size()) == spec.per_class_size) {
    out.positive_rows = pos_pool;
  } else {
    rng.shuffle(pos_pool);
    pos_pool.resize(static_cast<std::size_t>(spec.per_class_size));
    out.positive_rows = std::move(pos_pool);
  }
  out.negative_rows.reserve(static_cast<std::size_t>(spec.per_class_size));
  for (Index i = 0; i < spec.per_class_size; ++i) {
    out.negative_rows.push_back(neg_pool[rng.bounded(neg_pool.size())]);
  }
  return out;
}

DrawnSample draw_sample(const DatasetManifest& pool, const SampleSpec& spec,
                        const std::string& positive_label) {
  std::vector<std::string> labels;
  labels.reserve(pool.entries.size());
  for (const auto& e : pool.entries) labels.push_back(e.label);
  return draw_sample(labels, spec, positive_label);
}

SampleSplit split(const DrawnSample& sample, const SampleSpec& spec) {
  spec.validate();
  const auto check = [&](const std::vector<Index>& rows, const char* cls) {
    if (static_cast<Index>(rows.size()) != spec.per_class_size) {
      throw InvalidInputError(std::string("split: ") + cls + " class has " +
                              std::to_string(rows.size()) + " rows, expected " +
                              std::to_string(spec.per_class_size));
    }
  };
  check(sample.positive_rows, "positive");
  check(sample.negative_rows, "negative");

  Rng rng(derive_seed(spec.seed, seed_stream::kSplit));
  SampleSplit out;
  const auto take = [&](const std::vector<Index>& rows, int label) {
    std::vector<Index> perm = rows;
    rng.shuffle(perm);
    for (Index i = 0; i < spec.per_class_size; ++i) {
      if (i < spec.train_per_class) {
        out.train_rows.push_back(perm[static_cast<std::size_t>(i)]);
        out.train_labels.push_back(label);
      } else {
        out.test_rows.push_back(perm[static_cast<std::size_t>(i)]);
        out.test_labels.push_back(label);
      }
    }
  };
  take(sample.positive_rows, 1);
  take(sample.negative_rows, -1);
  return out;
}

void HarnessConfig::validate() const {
  if (samples < 1) throw ConfigError("sweep: need at least 1 sample");
  SampleSpec probe{1, per_class_size, train_per_class, test_per_class, 0};
  probe.validate();
  lbp.validate();
  if (scenarios.empty()) throw ConfigError("sweep: scenario list is empty");
  for (const auto& sc : scenarios) sc.validate();
}

std::string resolve_positive_label(std::span<const std::string> row_labels,
                                   const std::string& configured) {
  std::set<std::string> classes(row_labels.begin(), row_labels.end());
  if (classes.size() < 2) {
    throw InvalidInputError("sweep: need at least 2 classes, found " +
                            std::to_string(classes.size()));
  }
  if (configured.empty()) return *classes.begin();
  if (!classes.count(configured)) {
    throw InvalidInputError("sweep: positive label '" + configured + "' not present in the pool");
  }
  return configured;
}

std::vector<SampleFeatures> build_sample_features(const FeaturePool& pool,
                                                  const HarnessConfig& config) {
  config.validate();
  pool.validate();
  const std::string positive = resolve_positive_label(pool.labels, config.positive_label);

  std::vector<SampleFeatures> out;
  out.reserve(static_cast<std::size_t>(config.samples));
  for (int s = 1; s <= config.samples; ++s) {
    SampleSpec spec{s, config.per_class_size, config.train_per_class, config.test_per_class,
                    derive_seed(config.master_seed, seed_stream::kDraw,
                                static_cast<std::uint64_t>(s))};
    const DrawnSample drawn = draw_sample(pool.labels, spec, positive);
    const SampleSplit sp = split(drawn, spec);

    SampleFeatures f;
    f.sample_id = s;
    f.train_x.resize(static_cast<Index>(sp.train_rows.size()), pool.features.cols());
    f.train_y.resize(static_cast<Index>(sp.train_rows.size()));
    for (std::size_t i = 0; i < sp.train_rows.size(); ++i) {
      f.train_x.row(static_cast<Index>(i)) = pool.features.row(sp.train_rows[i]);
      f.train_y[static_cast<Index>(i)] = sp.train_labels[i];
    }
    f.test_x.resize(static_cast<Index>(sp.test_rows.size()), pool.features.cols());
    f.test_y.resize(static_cast<Index>(sp.test_rows.size()));
    for (std::size_t i = 0; i < sp.test_rows.size(); ++i) {
      f.test_x.row(static_cast<Index>(i)) = pool.features.row(sp.test_rows[i]);
      f.test_y[static_cast<Index>(i)] = sp.test_labels[i];
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

MetricsRecord evaluate_cell(const SampleFeatures& sample, const SvmScenario& scenario,
                            int scenario_id, std::uint64_t train_seed) {
  const bool cs = scenario.multi_class == MultiClass::kCrammerSinger;
  TrainingSet data;
  data.features = sample.train_x;
  if (cs) {
    // Class indices: negative -> 0, positive -> 1.
    data.labels.resize(sample.train_y.size());
    for (Index i = 0; i < sample.train_y.size(); ++i) {
      data.labels[i] = sample.train_y[i] > 0 ? 1 : 0;
    }
  } else {
    data.labels = sample.train_y;
  }

  TrainOptions options;
  options.seed = train_seed;
  const LinearModel model = train(data, scenario, options);

  std::vector<LabeledPrediction> labeled;
  std::vector<ScoredPrediction> scored;
  labeled.reserve(static_cast<std::size_t>(sample.test_y.size()));
  scored.reserve(static_cast<std::size_t>(sample.test_y.size()));
  for (Index i = 0; i < sample.test_y.size(); ++i) {
    const Eigen::VectorXd x = sample.test_x.row(i).transpose();
    const bool truth = sample.test_y[i] > 0;
    bool predicted;
    double score;
    if (cs) {
      const Eigen::VectorXd s = decision_function(model, x);
      score = s[1] - s[0];
      predicted = predict(model, x) == 1;
    } else {
      score = decision_value(model, x);
      predicted = predict(model, x) > 0;
    }
    labeled.push_back({predicted, truth});
    scored.push_back({score, truth});
  }

  const ContingencyTable t = contingency(labeled);
  const Rates r = rates(t);
  MetricsRecord rec;
  rec.scenario_id = scenario_id;
  rec.sample_id = sample.sample_id;
  rec.tp = t.tp;
  rec.fp = t.fp;
  rec.fn = t.fn;
  rec.tn = t.tn;
  rec.tpr = r.tpr;
  rec.fpr = r.fpr;
  rec.tnr = r.tnr;
  rec.precision = r.precision;
  rec.accuracy = r.accuracy;
  rec.auc = roc_auc(scored);
  return rec;
}

}  // namespace

SweepReport run_sweep(std::span<const SampleFeatures> samples,
                      std::span<const SvmScenario> scenarios, std::uint64_t master_seed) {
  if (samples.empty()) throw InvalidInputError("sweep: no samples");
  if (scenarios.empty()) throw InvalidInputError("sweep: no scenarios");
  for (const auto& sc : scenarios) sc.validate();

  SweepReport report;
  report.scenarios.assign(scenarios.begin(), scenarios.end());
  report.samples = static_cast<int>(samples.size());
  report.records.reserve(samples.size() * scenarios.size());

  for (std::size_t sid = 0; sid < scenarios.size(); ++sid) {
    for (const auto& sample : samples) {
      // The training seed depends on the sample alone, so scenarios that
      // define the same optimization problem train identical models.
      const std::uint64_t seed = derive_seed(master_seed, seed_stream::kTrain,
                                             static_cast<std::uint64_t>(sample.sample_id));
      try {
        report.records.push_back(
            evaluate_cell(sample, scenarios[sid], static_cast<int>(sid), seed));
      } catch (const Error& e) {
        throw Error("sweep: scenario S" + std::to_string(sid) + ", sample " +
                    std::to_string(sample.sample_id) + ": " + e.what());
      }
    }
  }

  report.per_scenario.reserve(scenarios.size());
  for (std::size_t sid = 0; sid < scenarios.size(); ++sid) {
    ScenarioAggregate agg;
    agg.scenario_id = static_cast<int>(sid);
    double precision_sum = 0;
    bool precision_defined = true;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const MetricsRecord& rec = report.records[sid * samples.size() + k];
      agg.mean_tpr += rec.tpr;
      agg.mean_fpr += rec.fpr;
      agg.mean_tnr += rec.tnr;
      agg.mean_accuracy += rec.accuracy;
      agg.mean_auc += rec.auc;
      if (rec.precision) {
        precision_sum += *rec.precision;
      } else {
        precision_defined = false;
      }
    }
    const double n = static_cast<double>(samples.size());
    agg.mean_tpr /= n;
    agg.mean_fpr /= n;
    agg.mean_tnr /= n;
    agg.mean_accuracy /= n;
    agg.mean_auc /= n;
    if (precision_defined) agg.mean_precision = precision_sum / n;
    report.per_scenario.push_back(agg);
  }

  report.sample_max_auc.assign(samples.size(), -1.0);
  report.sample_min_auc.assign(samples.size(), 2.0);
  for (std::size_t sid = 0; sid < scenarios.size(); ++sid) {
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double auc = report.records[sid * samples.size() + k].auc;
      report.sample_max_auc[k] = std::max(report.sample_max_auc[k], auc);
      report.sample_min_auc[k] = std::min(report.sample_min_auc[k], auc);
    }
  }
  return report;
}

int SweepReport::best_scenario_id() const {
  if (per_scenario.empty()) throw InvalidInputError("sweep: empty report");
  std::size_t best = 0;
  for (std::size_t i = 1; i < per_scenario.size(); ++i) {
    const auto& cur = per_scenario[i];
    const auto& top = per_scenario[best];
    if (cur.mean_auc > top.mean_auc ||
        (cur.mean_auc == top.mean_auc && cur.mean_fpr < top.mean_fpr)) {
      best = i;
    }
  }
  return per_scenario[best].scenario_id;
}

namespace {

void write_seed_line(std::ostream& out, std::uint64_t master_seed) {
  out << "# master_seed=" << master_seed << '\n';
}

std::string optional_cell(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

}  // namespace

void write_records_csv(std::ostream& out, const SweepReport& report, std::uint64_t master_seed) {
  write_seed_line(out, master_seed);
  out << "scenario_id,sample_id,tp,fp,fn,tn,tpr,fpr,tnr,precision,accuracy,auc\n";
  for (const auto& r : report.records) {
    out << r.scenario_id << ',' << r.sample_id << ',' << csv::format_double(r.tp) << ','
        << csv::format_double(r.fp) << ',' << csv::format_double(r.fn) << ','
        << csv::format_double(r.tn) << ',' << csv::format_double(r.tpr) << ','
        << csv::format_double(r.fpr) << ',' << csv::format_double(r.tnr) << ','
        << optional_cell(r.precision) << ',' << csv::format_double(r.accuracy) << ','
        << csv::format_double(r.auc) << '\n';
  }
}

void write_table3_csv(std::ostream& out, const SweepReport& report, std::uint64_t master_seed) {
  write_seed_line(out, master_seed);
  out << "scenario_id,C,tol,tpr,fpr\n";
  for (const auto& agg : report.per_scenario) {
    const auto& sc = report.scenarios[static_cast<std::size_t>(agg.scenario_id)];
    out << 'S' << agg.scenario_id << ',' << csv::format_double(sc.C) << ','
        << csv::format_double(sc.tol) << ',' << csv::format_double(agg.mean_tpr) << ','
        << csv::format_double(agg.mean_fpr) << '\n';
  }
}

void write_table4_csv(std::ostream& out, const SweepReport& report, std::uint64_t master_seed) {
  write_seed_line(out, master_seed);
  out << "scenario_id";
  for (int k = 1; k <= report.samples; ++k) out << ",auc_sample_" << k;
  out << ",mean_auc,tpr,fpr,precision,accuracy,tnr\n";
  const std::size_t samples = static_cast<std::size_t>(report.samples);
  for (const auto& agg : report.per_scenario) {
    const std::size_t sid = static_cast<std::size_t>(agg.scenario_id);
    out << 'S' << agg.scenario_id;
    for (std::size_t k = 0; k < samples; ++k) {
      out << ',' << csv::format_double(report.records[sid * samples + k].auc);
    }
    out << ',' << csv::format_double(agg.mean_auc) << ',' << csv::format_double(agg.mean_tpr)
        << ',' << csv::format_double(agg.mean_fpr) << ',' << optional_cell(agg.mean_precision)
        << ',' << csv::format_double(agg.mean_accuracy) << ','
        << csv::format_double(agg.mean_tnr) << '\n';
  }
}

void write_summary(std::ostream& out, const SweepReport& report, std::uint64_t master_seed,
                   bool with_timestamp) {
  write_seed_line(out, master_seed);
  const int best = report.best_scenario_id();
  out << "sweep: " << report.scenarios.size() << " scenarios x " << report.samples
      << " samples = " << report.records.size() << " records\n";
  const auto& sc = report.scenarios[static_cast<std::size_t>(best)];
  const auto& agg = report.per_scenario[static_cast<std::size_t>(best)];
  out << "best scenario: S" << best << " (C=" << csv::format_double(sc.C)
      << ", tol=" << csv::format_double(sc.tol) << ", loss=" << to_string(sc.loss)
      << ", penalty=" << to_string(sc.penalty) << ", dual=" << (sc.dual ? "true" : "false")
      << ", multi_class=" << to_string(sc.multi_class) << ")\n";
  out << "  mean auc=" << csv::format_double(agg.mean_auc)
      << ", tpr=" << csv::format_double(agg.mean_tpr)
      << ", fpr=" << csv::format_double(agg.mean_fpr)
      << ", accuracy=" << csv::format_double(agg.mean_accuracy) << '\n';
  out << "per-sample auc range:\n";
  for (int k = 0; k < report.samples; ++k) {
    out << "  sample " << k + 1 << ": max="
        << csv::format_double(report.sample_max_auc[static_cast<std::size_t>(k)])
        << ", min=" << csv::format_double(report.sample_min_auc[static_cast<std::size_t>(k)])
        << '\n';
  }
  if (with_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
    out << "generated: " << buf << "Z\n";
  }
}

}  // namespace motoclass
