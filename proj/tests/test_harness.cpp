#include "motoclass/harness.hpp"
#include "motoclass/rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace motoclass;

namespace {

std::vector<std::string> full_bank_labels() {
  std::vector<std::string> labels;
  labels.reserve(14114);
  for (int i = 0; i < 721; ++i) labels.push_back("moto");
  for (int i = 0; i < 13393; ++i) labels.push_back("other");
  return labels;
}

// Two clearly separated classes in 2 dims, enough rows for tiny sweeps.
FeaturePool separable_pool(Index per_class) {
  FeaturePool pool;
  pool.lbp.points = 4;   // bins() = 6, matched below
  pool.lbp.radius = 1.0;
  pool.features.resize(2 * per_class, 6);
  Rng rng(5);
  for (Index i = 0; i < 2 * per_class; ++i) {
    const bool positive = i < per_class;
    for (Index j = 0; j < 6; ++j) pool.features(i, j) = rng.unit() * 0.1;
    pool.features(i, 0) = positive ? 1.0 + rng.unit() : -1.0 - rng.unit();
    pool.labels.push_back(positive ? "a" : "b");
  }
  return pool;
}

}  // namespace

TEST_CASE("scenario table lays out the 20-entry sweep") {
  const auto table = scenario_table();
  REQUIRE(table.size() == 20);
  for (const auto& sc : table) sc.validate();

  // all-defaults first entry
  CHECK(table[0].C == 1.0);
  CHECK(table[0].tol == 1e-4);
  CHECK(table[0].loss == Loss::kSquaredHinge);
  CHECK(table[0].penalty == Penalty::kL2);
  CHECK(table[0].dual);
  CHECK(table[0].multi_class == MultiClass::kOvr);
  CHECK(table[0].max_iter == 1000);
  CHECK(table[0].fit_intercept);

  CHECK(table[9].C == 150.0);
  CHECK(table[9].tol == 1e-4);
  CHECK(table[9].penalty == Penalty::kL1);
  CHECK_FALSE(table[9].dual);
  CHECK(table[9].loss == Loss::kSquaredHinge);

  CHECK(table[12].C == 1.0);
  CHECK(table[12].tol == 0.01);
  CHECK(table[12].loss == Loss::kHinge);
  CHECK(table[12].dual);

  // blocks of five share (tol, C); variants repeat in a fixed order
  for (int block = 0; block < 4; ++block) {
    const double tol = block < 2 ? 1e-4 : 1e-2;
    const double c = block % 2 == 0 ? 1.0 : 150.0;
    const std::size_t base = static_cast<std::size_t>(5 * block);
    for (int v = 0; v < 5; ++v) {
      CHECK(table[base + v].tol == tol);
      CHECK(table[base + v].C == c);
    }
    CHECK(table[base + 1].multi_class == MultiClass::kCrammerSinger);
    CHECK(table[base + 2].loss == Loss::kHinge);
    CHECK_FALSE(table[base + 3].dual);
    CHECK(table[base + 4].penalty == Penalty::kL1);
    CHECK_FALSE(table[base + 4].dual);
  }
}

TEST_CASE("sample spec validation") {
  SampleSpec spec;
  spec.validate();  // defaults: 721 = 505 + 216

  spec.train_per_class = 500;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = SampleSpec{};
  spec.per_class_size = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = SampleSpec{};
  spec.sample_id = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = SampleSpec{};
  spec.test_per_class = -1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("drawing from a full-size two-class bank") {
  const auto labels = full_bank_labels();
  SampleSpec spec;
  spec.seed = 42;
  DrawnSample s = draw_sample(labels, spec, "moto");
  REQUIRE(s.positive_rows.size() == 721);
  REQUIRE(s.negative_rows.size() == 721);

  // exactly 721 positives exist, so the class is taken whole
  for (std::size_t i = 0; i < s.positive_rows.size(); ++i) {
    CHECK(s.positive_rows[i] == static_cast<Index>(i));
  }
  for (Index row : s.negative_rows) {
    CHECK(row >= 721);
    CHECK(row < 14114);
  }

  DrawnSample again = draw_sample(labels, spec, "moto");
  CHECK(again.positive_rows == s.positive_rows);
  CHECK(again.negative_rows == s.negative_rows);

  SampleSpec other = spec;
  other.seed = 43;
  CHECK(draw_sample(labels, other, "moto").negative_rows != s.negative_rows);
}

TEST_CASE("drawing oversized and degenerate pools") {
  std::vector<std::string> labels;
  for (int i = 0; i < 900; ++i) labels.push_back("pos");
  labels.push_back("neg");  // single negative at index 900

  SampleSpec spec;
  spec.per_class_size = 721;
  spec.train_per_class = 505;
  spec.test_per_class = 216;
  spec.seed = 9;
  DrawnSample s = draw_sample(labels, spec, "pos");
  REQUIRE(s.positive_rows.size() == 721);
  std::set<Index> distinct(s.positive_rows.begin(), s.positive_rows.end());
  CHECK(distinct.size() == 721);  // without replacement
  for (Index row : s.negative_rows) CHECK(row == 900);  // with replacement from a pool of 1

  SampleSpec undersized = spec;
  undersized.per_class_size = 1000;
  undersized.train_per_class = 700;
  undersized.test_per_class = 300;
  CHECK_THROWS_AS(draw_sample(labels, undersized, "pos"), InvalidInputError);
  CHECK_THROWS_AS(draw_sample(labels, spec, "no_such_label"), InvalidInputError);
}

TEST_CASE("draw_sample accepts a manifest directly") {
  DatasetManifest m;
  for (int i = 0; i < 3; ++i) {
    ManifestEntry e;
    e.path = "p/" + std::to_string(i) + ".png";
    e.label = "p";
    m.entries.push_back(e);
  }
  ManifestEntry n;
  n.path = "n/0.png";
  n.label = "n";
  m.entries.push_back(n);

  SampleSpec spec;
  spec.per_class_size = 3;
  spec.train_per_class = 2;
  spec.test_per_class = 1;
  DrawnSample s = draw_sample(m, spec, "p");
  CHECK(s.positive_rows == std::vector<Index>{0, 1, 2});
  for (Index row : s.negative_rows) CHECK(row == 3);
}

TEST_CASE("splitting is stratified, disjoint and deterministic") {
  const auto labels = full_bank_labels();
  SampleSpec spec;
  spec.seed = 7;
  DrawnSample s = draw_sample(labels, spec, "moto");
  SampleSplit sp = split(s, spec);

  REQUIRE(sp.train_rows.size() == 1010);
  REQUIRE(sp.test_rows.size() == 432);
  REQUIRE(sp.train_labels.size() == 1010);
  REQUIRE(sp.test_labels.size() == 432);

  CHECK(std::count(sp.train_labels.begin(), sp.train_labels.end(), 1) == 505);
  CHECK(std::count(sp.train_labels.begin(), sp.train_labels.end(), -1) == 505);
  CHECK(std::count(sp.test_labels.begin(), sp.test_labels.end(), 1) == 216);
  CHECK(std::count(sp.test_labels.begin(), sp.test_labels.end(), -1) == 216);

  // per class, train and test positions partition the drawn rows exactly
  auto class_rows = [&](int label) {
    std::vector<Index> rows;
    for (std::size_t i = 0; i < sp.train_rows.size(); ++i) {
      if (sp.train_labels[i] == label) rows.push_back(sp.train_rows[i]);
    }
    for (std::size_t i = 0; i < sp.test_rows.size(); ++i) {
      if (sp.test_labels[i] == label) rows.push_back(sp.test_rows[i]);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  std::vector<Index> pos_sorted = s.positive_rows;
  std::sort(pos_sorted.begin(), pos_sorted.end());
  std::vector<Index> neg_sorted = s.negative_rows;
  std::sort(neg_sorted.begin(), neg_sorted.end());
  CHECK(class_rows(1) == pos_sorted);
  CHECK(class_rows(-1) == neg_sorted);

  SampleSplit rerun = split(s, spec);
  CHECK(rerun.train_rows == sp.train_rows);
  CHECK(rerun.test_rows == sp.test_rows);
}

TEST_CASE("small split arithmetic and size mismatch") {
  SampleSpec spec;
  spec.per_class_size = 10;
  spec.train_per_class = 7;
  spec.test_per_class = 3;
  spec.seed = 3;
  DrawnSample s;
  for (Index i = 0; i < 10; ++i) s.positive_rows.push_back(i);
  for (Index i = 0; i < 10; ++i) s.negative_rows.push_back(100 + i % 4);
  SampleSplit sp = split(s, spec);
  CHECK(sp.train_rows.size() == 14);
  CHECK(sp.test_rows.size() == 6);

  s.negative_rows.pop_back();
  CHECK_THROWS_AS(split(s, spec), InvalidInputError);
}

TEST_CASE("resolve_positive_label") {
  std::vector<std::string> labels = {"zebra", "apple", "zebra", "apple"};
  CHECK(resolve_positive_label(labels, "") == "apple");
  CHECK(resolve_positive_label(labels, "zebra") == "zebra");
  CHECK_THROWS_AS(resolve_positive_label(labels, "mango"), InvalidInputError);
  std::vector<std::string> one = {"only", "only"};
  CHECK_THROWS_AS(resolve_positive_label(one, ""), InvalidInputError);
}

TEST_CASE("harness config validation") {
  HarnessConfig config;
  config.validate();
  config.samples = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = HarnessConfig{};
  config.train_per_class = 1;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = HarnessConfig{};
  config.scenarios.clear();
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = HarnessConfig{};
  config.scenarios[0].C = -1;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("build_sample_features materializes labeled rows") {
  FeaturePool pool = separable_pool(6);
  HarnessConfig config;
  config.master_seed = 11;
  config.samples = 2;
  config.per_class_size = 4;
  config.train_per_class = 3;
  config.test_per_class = 1;
  config.lbp = pool.lbp;

  const auto samples = build_sample_features(pool, config);
  REQUIRE(samples.size() == 2);
  for (const auto& s : samples) {
    CHECK(s.train_x.rows() == 6);
    CHECK(s.test_x.rows() == 2);
    CHECK((s.train_y.array() == 1).count() == 3);
    CHECK((s.train_y.array() == -1).count() == 3);
    CHECK((s.test_y.array() == 1).count() == 1);
    CHECK((s.test_y.array() == -1).count() == 1);
    // positive label is the lexicographically first class ("a"), whose
    // rows carry the +1 marker in the first feature
    for (Index i = 0; i < s.train_y.size(); ++i) {
      CHECK((s.train_x(i, 0) > 0) == (s.train_y[i] == 1));
    }
  }

  // samples differ (independent draws) but reruns are identical
  const auto rerun = build_sample_features(pool, config);
  CHECK(rerun[0].train_x == samples[0].train_x);
  CHECK(rerun[1].test_x == samples[1].test_x);
}

TEST_CASE("run_sweep produces one record per cell and exact means") {
  FeaturePool pool = separable_pool(8);
  HarnessConfig config;
  config.master_seed = 77;
  config.samples = 2;
  config.per_class_size = 6;
  config.train_per_class = 4;
  config.test_per_class = 2;
  config.lbp = pool.lbp;

  const auto samples = build_sample_features(pool, config);
  std::vector<SvmScenario> scenarios(2);
  scenarios[1].C = 150;
  scenarios[1].loss = Loss::kHinge;

  SweepReport report = run_sweep(samples, scenarios, config.master_seed);
  REQUIRE(report.records.size() == 4);
  REQUIRE(report.per_scenario.size() == 2);
  CHECK(report.samples == 2);

  // records are scenario-major
  CHECK(report.records[0].scenario_id == 0);
  CHECK(report.records[0].sample_id == 1);
  CHECK(report.records[1].scenario_id == 0);
  CHECK(report.records[1].sample_id == 2);
  CHECK(report.records[2].scenario_id == 1);

  for (std::size_t sid = 0; sid < 2; ++sid) {
    const auto& agg = report.per_scenario[sid];
    const auto& a = report.records[sid * 2];
    const auto& b = report.records[sid * 2 + 1];
    CHECK(agg.mean_auc == doctest::Approx((a.auc + b.auc) / 2).epsilon(1e-12));
    CHECK(agg.mean_tpr == doctest::Approx((a.tpr + b.tpr) / 2).epsilon(1e-12));
    CHECK(agg.mean_fpr == doctest::Approx((a.fpr + b.fpr) / 2).epsilon(1e-12));
    CHECK(agg.mean_accuracy == doctest::Approx((a.accuracy + b.accuracy) / 2).epsilon(1e-12));
  }

  // separable data: every cell is perfect
  for (const auto& rec : report.records) {
    CHECK(rec.auc == 1.0);
    CHECK(rec.accuracy == 1.0);
  }
  CHECK(report.sample_max_auc == std::vector<double>{1.0, 1.0});
  CHECK(report.sample_min_auc == std::vector<double>{1.0, 1.0});

  SweepReport rerun = run_sweep(samples, scenarios, config.master_seed);
  CHECK(rerun.records.size() == report.records.size());
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    CHECK(rerun.records[i].auc == report.records[i].auc);
    CHECK(rerun.records[i].tp == report.records[i].tp);
  }

  SweepReport single = run_sweep(std::span(samples).first(1), std::span(scenarios).first(1),
                                 config.master_seed);
  CHECK(single.records.size() == 1);
}

TEST_CASE("a failing cell names its scenario and sample") {
  FeaturePool pool = separable_pool(8);
  HarnessConfig config;
  config.samples = 1;
  config.per_class_size = 6;
  config.train_per_class = 4;
  config.test_per_class = 2;
  config.lbp = pool.lbp;
  const auto samples = build_sample_features(pool, config);

  std::vector<SvmScenario> scenarios(2);
  scenarios[1].class_weights = {1.0, 1.0, 1.0};  // rejected at training time

  try {
    run_sweep(samples, scenarios, 0);
    FAIL("expected sweep failure");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("S1") != std::string::npos);
    CHECK(msg.find("sample 1") != std::string::npos);
  }
}

TEST_CASE("best scenario: mean auc, then lower fpr, then lower index") {
  SweepReport report;
  report.per_scenario.resize(4);
  for (int i = 0; i < 4; ++i) report.per_scenario[static_cast<std::size_t>(i)].scenario_id = i;
  report.per_scenario[0].mean_auc = 0.9;
  report.per_scenario[0].mean_fpr = 0.2;
  report.per_scenario[1].mean_auc = 0.9;
  report.per_scenario[1].mean_fpr = 0.1;
  report.per_scenario[2].mean_auc = 0.9;
  report.per_scenario[2].mean_fpr = 0.1;
  report.per_scenario[3].mean_auc = 0.85;
  report.per_scenario[3].mean_fpr = 0.0;
  CHECK(report.best_scenario_id() == 1);

  report.per_scenario[3].mean_auc = 0.95;
  CHECK(report.best_scenario_id() == 3);

  SweepReport empty;
  CHECK_THROWS_AS(empty.best_scenario_id(), InvalidInputError);
}

TEST_CASE("report writers emit the seed line and pinned headers") {
  FeaturePool pool = separable_pool(8);
  HarnessConfig config;
  config.master_seed = 424242;
  config.samples = 2;
  config.per_class_size = 6;
  config.train_per_class = 4;
  config.test_per_class = 2;
  config.lbp = pool.lbp;
  const auto samples = build_sample_features(pool, config);
  std::vector<SvmScenario> scenarios(2);
  SweepReport report = run_sweep(samples, scenarios, config.master_seed);

  std::stringstream records;
  write_records_csv(records, report, config.master_seed);
  std::string line;
  std::getline(records, line);
  CHECK(line == "# master_seed=424242");
  std::getline(records, line);
  CHECK(line == "scenario_id,sample_id,tp,fp,fn,tn,tpr,fpr,tnr,precision,accuracy,auc");
  int rows = 0;
  while (std::getline(records, line)) rows += !line.empty();
  CHECK(rows == 4);

  std::stringstream t3;
  write_table3_csv(t3, report, config.master_seed);
  std::getline(t3, line);
  CHECK(line == "# master_seed=424242");
  std::getline(t3, line);
  CHECK(line == "scenario_id,C,tol,tpr,fpr");
  std::getline(t3, line);
  CHECK(line.substr(0, 3) == "S0,");

  std::stringstream t4;
  write_table4_csv(t4, report, config.master_seed);
  std::getline(t4, line);
  CHECK(line == "# master_seed=424242");
  std::getline(t4, line);
  CHECK(line == "scenario_id,auc_sample_1,auc_sample_2,mean_auc,tpr,fpr,precision,accuracy,tnr");

  std::stringstream s1, s2, s3;
  write_summary(s1, report, config.master_seed, false);
  write_summary(s2, report, config.master_seed, false);
  CHECK(s1.str() == s2.str());
  CHECK(s1.str().find("generated:") == std::string::npos);
  CHECK(s1.str().find("# master_seed=424242") == 0);
  CHECK(s1.str().find("best scenario: S") != std::string::npos);
  write_summary(s3, report, config.master_seed, true);
  CHECK(s3.str().find("generated:") != std::string::npos);
}
