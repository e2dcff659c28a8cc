#include "motoclass/image.hpp"
#include "motoclass/mesh.hpp"
#include "motoclass/rng.hpp"

#include "doctest.h"

#include <vector>

using namespace motoclass;

namespace {

RgbImage solid_rgb(Index rows, Index cols, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img;
  img.r = Plane<std::uint8_t>::Constant(rows, cols, r);
  img.g = Plane<std::uint8_t>::Constant(rows, cols, g);
  img.b = Plane<std::uint8_t>::Constant(rows, cols, b);
  return img;
}

}  // namespace

TEST_CASE("grayscale conversion fixtures") {
  CHECK(to_grayscale(solid_rgb(2, 2, 0, 0, 0))(0, 0) == 0);
  CHECK(to_grayscale(solid_rgb(2, 2, 255, 255, 255))(1, 1) == 255);
  // round(0.299*100 + 0.587*200 + 0.114*50) = round(153.0)
  CHECK(to_grayscale(solid_rgb(1, 1, 100, 200, 50))(0, 0) == 153);
}

TEST_CASE("grayscale is exact on already-gray frames") {
  Rng rng(42);
  RgbImage img;
  img.r.resize(5, 7);
  for (Index r = 0; r < 5; ++r)
    for (Index c = 0; c < 7; ++c) img.r(r, c) = static_cast<std::uint8_t>(rng.bounded(256));
  img.g = img.r;
  img.b = img.r;
  GrayImage gray = to_grayscale(img);
  CHECK(gray == img.r);
}

TEST_CASE("grayscale rejects zero-size frames") {
  RgbImage empty;
  CHECK_THROWS_AS(to_grayscale(empty), InvalidInputError);
  RgbImage mismatched = solid_rgb(2, 2, 1, 2, 3);
  mismatched.b.resize(2, 3);
  CHECK_THROWS_AS(to_grayscale(mismatched), InvalidInputError);
}

TEST_CASE("default mesh yields the 24-cell grid") {
  MeshSpec spec;
  spec.validate_for_frame(1920, 1080);
  auto cells = mesh_cells(spec);
  REQUIRE(cells.size() == 24);
  CHECK(cells[0].x == 0);
  CHECK(cells[0].y == 0);
  CHECK(cells[0].width == 210);
  CHECK(cells[0].height == 120);
  // row-major: cell (2,7) is the last one
  const CellRect& last = cells[2 * 8 + 7];
  CHECK(last.x == 1470);
  CHECK(last.y == 240);
}

TEST_CASE("1x1 mesh is a single rectangle at the origin") {
  MeshSpec spec;
  spec.rows = 1;
  spec.cols = 1;
  spec.origin_x = 5;
  spec.origin_y = 9;
  auto cells = mesh_cells(spec);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].x == 5);
  CHECK(cells[0].y == 9);
}

TEST_CASE("mesh validation failures") {
  MeshSpec spec;
  spec.rows = 0;
  CHECK_THROWS_AS(spec.validate(), MeshError);
  spec = MeshSpec{};
  spec.cell_width = -1;
  CHECK_THROWS_AS(spec.validate(), MeshError);
  spec = MeshSpec{};
  spec.origin_x = -2;
  CHECK_THROWS_AS(spec.validate(), MeshError);
  spec = MeshSpec{};
  CHECK_THROWS_AS(spec.validate_for_frame(1679, 360), MeshError);
  CHECK_THROWS_AS(spec.validate_for_frame(1680, 359), MeshError);
  spec.validate_for_frame(1680, 360);
}

TEST_CASE("mesh cells tile without overlap and cover the exact area") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    MeshSpec spec;
    spec.rows = 1 + static_cast<Index>(rng.bounded(4));
    spec.cols = 1 + static_cast<Index>(rng.bounded(5));
    spec.cell_width = 1 + static_cast<Index>(rng.bounded(10));
    spec.cell_height = 1 + static_cast<Index>(rng.bounded(10));
    spec.origin_x = static_cast<Index>(rng.bounded(4));
    spec.origin_y = static_cast<Index>(rng.bounded(4));
    auto cells = mesh_cells(spec);
    REQUIRE(static_cast<Index>(cells.size()) == spec.cell_count());

    Index area = 0;
    for (const auto& c : cells) area += c.width * c.height;
    CHECK(area == spec.rows * spec.cols * spec.cell_width * spec.cell_height);

    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        const auto& a = cells[i];
        const auto& b = cells[j];
        const bool overlap = a.x < b.x + b.width && b.x < a.x + a.width &&
                             a.y < b.y + b.height && b.y < a.y + a.height;
        CHECK_FALSE(overlap);
      }
    }
  }
}

TEST_CASE("extract_cell copies the right region") {
  MeshSpec spec;
  GrayImage frame(1080, 1920);
  for (Index y = 0; y < 1080; ++y)
    for (Index x = 0; x < 1920; ++x) frame(y, x) = static_cast<std::uint8_t>(x % 256);

  GrayImage cell = extract_cell(frame, spec, 0, 1);
  CHECK(cell.cols() == 210);
  CHECK(cell.rows() == 120);
  CHECK(cell(0, 0) == 210);  // x = 1*210

  GrayImage constant = extract_cell(GrayImage::Constant(1080, 1920, 77), spec, 2, 5);
  CHECK((constant.array() == 77).all());
}

TEST_CASE("extract_cell index and fit errors") {
  MeshSpec spec;
  GrayImage frame = GrayImage::Zero(1080, 1920);
  CHECK_THROWS_AS(extract_cell(frame, spec, 3, 0), IndexError);
  CHECK_THROWS_AS(extract_cell(frame, spec, 0, 8), IndexError);
  CHECK_THROWS_AS(extract_cell(frame, spec, -1, 0), IndexError);
  GrayImage small = GrayImage::Zero(100, 100);
  CHECK_THROWS_AS(extract_cell(small, spec, 0, 0), MeshError);
}

TEST_CASE("cells extracted from a synthesized frame round-trip bit-exactly") {
  MeshSpec spec;
  spec.rows = 2;
  spec.cols = 3;
  spec.cell_width = 4;
  spec.cell_height = 5;
  Rng rng(99);
  std::vector<GrayImage> wanted;
  GrayImage frame = GrayImage::Zero(spec.rows * spec.cell_height, spec.cols * spec.cell_width);
  for (Index r = 0; r < spec.rows; ++r) {
    for (Index c = 0; c < spec.cols; ++c) {
      GrayImage cell(spec.cell_height, spec.cell_width);
      for (Index y = 0; y < spec.cell_height; ++y)
        for (Index x = 0; x < spec.cell_width; ++x)
          cell(y, x) = static_cast<std::uint8_t>(rng.bounded(256));
      frame.block(r * spec.cell_height, c * spec.cell_width, spec.cell_height, spec.cell_width) =
          cell;
      wanted.push_back(std::move(cell));
    }
  }
  for (Index r = 0; r < spec.rows; ++r)
    for (Index c = 0; c < spec.cols; ++c)
      CHECK(extract_cell(frame, spec, r, c) == wanted[static_cast<std::size_t>(r * spec.cols + c)]);
}

TEST_CASE("bilinear sampling fixtures") {
  GrayImage img(2, 2);
  img << 10, 20, 30, 40;
  CHECK(sample_bilinear(img, 0.0, 0.0) == 10.0);
  CHECK(sample_bilinear(img, 1.0, 1.0) == 40.0);
  CHECK(sample_bilinear(img, 0.0, 0.5) == 15.0);  // midpoint of 10 and 20
  CHECK(sample_bilinear(img, 0.5, 0.0) == 20.0);
  CHECK(sample_bilinear(img, -5.0, 0.0) == 10.0);  // clamped to pixel (0,0)
  CHECK(sample_bilinear(img, 10.0, 10.0) == 40.0);
}
