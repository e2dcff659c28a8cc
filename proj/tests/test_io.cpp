#include "motoclass/feature_io.hpp"
#include "motoclass/image_io.hpp"
#include "motoclass/manifest.hpp"
#include "motoclass/model_io.hpp"
#include "motoclass/rng.hpp"
#include "motoclass/svm.hpp"
#include "motoclass/synth.hpp"

#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace motoclass;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("motoclass_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

GrayImage random_gray(Rng& rng, Index rows, Index cols) {
  GrayImage img(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) img(r, c) = static_cast<std::uint8_t>(rng.bounded(256));
  return img;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TrainingSet tiny_set() {
  TrainingSet data;
  data.features.resize(4, 3);
  data.features << 1, 0, 0.25, -1, 0.5, 0, 0.75, -0.5, 1, -0.25, 1, -1;
  data.labels.resize(4);
  data.labels << 1, -1, 1, -1;
  return data;
}

}  // namespace

TEST_CASE("build_manifest scans a two-class tree") {
  TempDir tmp("manifest");
  Rng rng(1);
  fs::create_directories(tmp.path / "pos");
  fs::create_directories(tmp.path / "neg");
  write_png_gray(tmp.path / "pos/b.png", random_gray(rng, 8, 8));
  write_png_gray(tmp.path / "pos/a.png", random_gray(rng, 8, 8));
  write_jpeg_gray(tmp.path / "neg/c.jpg", random_gray(rng, 8, 8));
  write_png_gray(tmp.path / "neg/a.png", random_gray(rng, 8, 8));
  write_png_gray(tmp.path / "neg/b.png", random_gray(rng, 8, 8));

  DatasetManifest m = build_manifest(tmp.path);
  REQUIRE(m.entries.size() == 5);
  CHECK(m.classes() == std::vector<std::string>{"neg", "pos"});
  int pos_count = 0;
  for (const auto& e : m.entries) pos_count += e.label == "pos";
  CHECK(pos_count == 2);
  // lexicographic by relative path
  CHECK(m.entries[0].path == "neg/a.png");
  CHECK(m.entries[1].path == "neg/b.png");
  CHECK(m.entries[2].path == "neg/c.jpg");
  CHECK(m.entries[3].path == "pos/a.png");
  CHECK(m.entries[4].path == "pos/b.png");
  CHECK(m.entries[0].source_id == "a");
}

TEST_CASE("build_manifest layout errors") {
  TempDir tmp("layout");
  fs::create_directories(tmp.path / "only");
  write_png_gray(tmp.path / "only/a.png", GrayImage::Constant(4, 4, 9));
  CHECK_THROWS_AS(build_manifest(tmp.path), LayoutError);

  fs::create_directories(tmp.path / "second");
  CHECK_THROWS_AS(build_manifest(tmp.path), LayoutError);  // second class empty

  CHECK_THROWS_AS(build_manifest(tmp.path / "missing"), LayoutError);
}

TEST_CASE("build_manifest reports every undecodable file") {
  TempDir tmp("garbage");
  fs::create_directories(tmp.path / "pos");
  fs::create_directories(tmp.path / "neg");
  write_png_gray(tmp.path / "pos/ok.png", GrayImage::Constant(4, 4, 1));
  write_png_gray(tmp.path / "neg/ok.png", GrayImage::Constant(4, 4, 2));
  std::ofstream(tmp.path / "neg/fake.png") << "not an image";
  std::ofstream(tmp.path / "pos/fake2.jpg") << "also not an image";

  try {
    build_manifest(tmp.path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("fake.png") != std::string::npos);
    CHECK(msg.find("fake2.jpg") != std::string::npos);
  }
}

TEST_CASE("manifest CSV round-trips entries with optionals and quoting") {
  DatasetManifest m;
  ManifestEntry plain;
  plain.path = "neg/a.png";
  plain.label = "neg";
  plain.source_id = "a";
  ManifestEntry full;
  full.path = "pos/tricky, \"quoted\".png";
  full.label = "pos";
  full.source_id = "cam,7";
  full.frame_index = 12;
  full.cell_row = 2;
  full.cell_col = 7;
  m.entries = {plain, full};

  std::stringstream io;
  write_manifest_csv(m, io);
  DatasetManifest back = read_manifest_csv(io);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].path == plain.path);
  CHECK_FALSE(back.entries[0].frame_index.has_value());
  CHECK_FALSE(back.entries[0].cell_row.has_value());
  CHECK(back.entries[1].path == full.path);
  CHECK(back.entries[1].source_id == "cam,7");
  CHECK(back.entries[1].frame_index == 12);
  CHECK(back.entries[1].cell_row == 2);
  CHECK(back.entries[1].cell_col == 7);

  std::stringstream bad("wrong,header\n");
  CHECK_THROWS_AS(read_manifest_csv(bad), InvalidInputError);
}

TEST_CASE("manifest validation and path resolution") {
  DatasetManifest dup;
  ManifestEntry e;
  e.path = "x.png";
  e.label = "a";
  dup.entries = {e, e};
  CHECK_THROWS_AS(dup.validate(false), LayoutError);

  DatasetManifest one_class;
  one_class.entries = {e};
  CHECK_THROWS_AS(one_class.validate(true), LayoutError);
  one_class.validate(false);

  ManifestEntry rel;
  rel.path = "sub/img.png";
  CHECK(resolve_entry_path("/data", rel) == fs::path("/data/sub/img.png"));
  ManifestEntry abs;
  abs.path = "/elsewhere/img.png";
  CHECK(resolve_entry_path("/data", abs) == fs::path("/elsewhere/img.png"));
}

TEST_CASE("png round-trips gray pixels exactly") {
  TempDir tmp("png");
  Rng rng(33);
  GrayImage img = random_gray(rng, 17, 23);
  write_png_gray(tmp.path / "img.png", img);
  CHECK(is_supported_image(tmp.path / "img.png"));
  GrayImage back = read_image_gray(tmp.path / "img.png");
  CHECK(back == img);

  RgbImage rgb = read_image_rgb(tmp.path / "img.png");
  CHECK(rgb.r == img);  // gray source replicates into all channels
  CHECK(rgb.g == img);
  CHECK(rgb.b == img);
}

TEST_CASE("jpeg survives a lossy round-trip") {
  TempDir tmp("jpeg");
  GrayImage img(32, 48);
  for (Index r = 0; r < 32; ++r)
    for (Index c = 0; c < 48; ++c)
      img(r, c) = static_cast<std::uint8_t>(128 + 100 * std::sin(c * 0.2));
  write_jpeg_gray(tmp.path / "img.jpg", img, 95);
  CHECK(is_supported_image(tmp.path / "img.jpg"));
  GrayImage back = read_image_gray(tmp.path / "img.jpg");
  REQUIRE(back.rows() == img.rows());
  REQUIRE(back.cols() == img.cols());
  double worst = 0;
  for (Index r = 0; r < 32; ++r)
    for (Index c = 0; c < 48; ++c)
      worst = std::max(worst, std::abs(double(back(r, c)) - double(img(r, c))));
  CHECK(worst <= 12.0);
}

TEST_CASE("image io error cases") {
  TempDir tmp("ioerr");
  CHECK_THROWS_AS(read_image_gray(tmp.path / "missing.png"), IoError);
  CHECK_THROWS_AS(is_supported_image(tmp.path / "missing.png"), IoError);
  std::ofstream(tmp.path / "junk.png") << "PNG? no.";
  CHECK_FALSE(is_supported_image(tmp.path / "junk.png"));
  CHECK_THROWS_AS(read_image_rgb(tmp.path / "junk.png"), IoError);
  CHECK_THROWS_AS(write_png_gray(tmp.path / "sub/does/not/exist.png", GrayImage::Constant(2, 2, 0)),
                  IoError);
}

TEST_CASE("feature CSV round-trips bit for bit at full precision") {
  TempDir tmp("features");
  Rng rng(2);
  FeaturePool pool;
  pool.lbp.points = 4;
  pool.lbp.radius = 1.0;
  pool.features.resize(3, 6);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 6; ++j) pool.features(i, j) = rng.unit();
  pool.labels = {"neg", "pos, special", "pos"};

  write_features_csv(tmp.path / "f.csv", pool);
  CHECK(fs::exists(tmp.path / "f.csv.json"));
  FeaturePool back = read_features_csv(tmp.path / "f.csv");
  CHECK(back.features == pool.features);
  CHECK(back.labels == pool.labels);
  CHECK(back.lbp.points == 4);
  CHECK(back.lbp.radius == 1.0);
}

TEST_CASE("feature CSV rejects mismatched shapes and headers") {
  LbpParams p4;
  p4.points = 4;
  p4.radius = 1.0;

  std::stringstream wrong_header("label,f0,f1\nx,0.5,0.5\n");
  CHECK_THROWS_AS(read_features_csv(wrong_header, p4), InvalidInputError);

  std::stringstream short_row("label,f0,f1,f2,f3,f4,f5\nx,0.5,0.5\n");
  CHECK_THROWS_AS(read_features_csv(short_row, p4), InvalidInputError);

  std::stringstream bad_number("label,f0,f1,f2,f3,f4,f5\nx,0.5,oops,0,0,0,0\n");
  CHECK_THROWS_AS(read_features_csv(bad_number, p4), InvalidInputError);

  std::stringstream empty("label,f0,f1,f2,f3,f4,f5\n");
  CHECK_THROWS_AS(read_features_csv(empty, p4), InvalidInputError);
}

TEST_CASE("feature sidecar JSON round-trips") {
  LbpParams p;
  p.points = 16;
  p.radius = 2.5;
  LbpParams back = parse_feature_sidecar(feature_sidecar_json(p));
  CHECK(back.points == 16);
  CHECK(back.radius == 2.5);
  CHECK_THROWS_AS(parse_feature_sidecar("not json"), InvalidInputError);
  CHECK_THROWS_AS(parse_feature_sidecar("{\"points\": 16}"), InvalidInputError);
}

TEST_CASE("binary model bundles round-trip bitwise") {
  TrainingSet data = tiny_set();
  SvmScenario sc;
  sc.C = 150;
  sc.loss = Loss::kHinge;
  ModelBundle bundle;
  bundle.model = train(data, sc);
  bundle.lbp = LbpParams{};
  bundle.positive_label = "moto";
  bundle.negative_label = "other";
  bundle.scenario_id = 12;

  std::stringstream io;
  write_model_json(io, bundle);
  ModelBundle back = read_model_json(io);
  CHECK(back.model.weights == bundle.model.weights);
  CHECK(back.model.intercepts == bundle.model.intercepts);
  CHECK(back.model.classes == bundle.model.classes);
  CHECK(back.model.scenario.C == 150.0);
  CHECK(back.model.scenario.loss == Loss::kHinge);
  CHECK(back.model.diagnostics.final_objective == bundle.model.diagnostics.final_objective);
  CHECK(back.model.diagnostics.converged == bundle.model.diagnostics.converged);
  CHECK(back.model.diagnostics.shuffle_seed == bundle.model.diagnostics.shuffle_seed);
  REQUIRE(back.lbp.has_value());
  CHECK(back.lbp->points == 24);
  CHECK(back.positive_label == "moto");
  CHECK(back.negative_label == "other");
  CHECK(back.scenario_id == 12);
}

TEST_CASE("multiclass model bundles round-trip bitwise") {
  TrainingSet mc = tiny_set();
  mc.labels << 0, 1, 2, 1;
  SvmScenario cs;
  cs.multi_class = MultiClass::kCrammerSinger;
  ModelBundle bundle;
  bundle.model = train(mc, cs);

  std::stringstream io;
  write_model_json(io, bundle);
  ModelBundle back = read_model_json(io);
  CHECK(back.model.weights == bundle.model.weights);
  CHECK(back.model.intercepts == bundle.model.intercepts);
  CHECK(back.model.classes == std::vector<int>{0, 1, 2});
  CHECK_FALSE(back.lbp.has_value());
  CHECK_FALSE(back.scenario_id.has_value());
  CHECK(back.positive_label.empty());
}

TEST_CASE("model files reject malformed input") {
  std::stringstream junk("{{{");
  CHECK_THROWS_AS(read_model_json(junk), InvalidInputError);

  TrainingSet data = tiny_set();
  ModelBundle bundle;
  bundle.model = train(data, SvmScenario{});
  std::stringstream io;
  write_model_json(io, bundle);
  std::string text = io.str();
  const auto pos = text.find("\"weights\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 9, "\"wights\"");
  std::stringstream broken(text);
  CHECK_THROWS_AS(read_model_json(broken), InvalidInputError);

  TempDir tmp("model");
  CHECK_THROWS_AS(read_model_json(tmp.path / "missing.json"), IoError);
}

TEST_CASE("scenario JSON text round-trips and tolerates omissions") {
  SvmScenario sc;
  sc.C = 150;
  sc.tol = 0.01;
  sc.loss = Loss::kHinge;
  sc.dual = true;
  sc.max_iter = 5000;
  sc.intercept_scaling = 2.0;
  SvmScenario back = scenario_from_json_text(scenario_to_json_text(sc));
  CHECK(back.C == 150.0);
  CHECK(back.tol == 0.01);
  CHECK(back.loss == Loss::kHinge);
  CHECK(back.dual);
  CHECK(back.max_iter == 5000);
  CHECK(back.intercept_scaling == 2.0);

  SvmScenario defaults = scenario_from_json_text("{}");
  CHECK(defaults.C == 1.0);
  CHECK(defaults.tol == 1e-4);
  CHECK(defaults.loss == Loss::kSquaredHinge);
  CHECK(defaults.max_iter == 1000);

  SvmScenario partial = scenario_from_json_text("{\"C\": 150}");
  CHECK(partial.C == 150.0);
  CHECK(partial.tol == 1e-4);

  CHECK_THROWS_AS(scenario_from_json_text("nope"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json_text("{\"C\": -1}"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json_text("{\"loss\": \"hinge\", \"dual\": false}"), ConfigError);
}

TEST_CASE("synthetic corpus is deterministic and well-formed") {
  TempDir a("syntha");
  TempDir b("synthb");
  CHECK(write_synth_corpus(a.path, 3, 64, 48, 7) == 6);
  CHECK(write_synth_corpus(b.path, 3, 64, 48, 7) == 6);

  int files = 0;
  for (const char* cls : {"smooth", "noise"}) {
    for (const auto& entry : fs::directory_iterator(a.path / cls)) {
      ++files;
      GrayImage img = read_image_gray(entry.path());
      CHECK(img.cols() == 64);
      CHECK(img.rows() == 48);
      CHECK(slurp(entry.path()) == slurp(b.path / cls / entry.path().filename()));
    }
  }
  CHECK(files == 6);

  DatasetManifest m = build_manifest(a.path);
  CHECK(m.entries.size() == 6);
  CHECK(m.classes() == std::vector<std::string>{"noise", "smooth"});
}
