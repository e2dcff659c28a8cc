#include "motoclass/mesh.hpp"

#include <string>

namespace motoclass {

void MeshSpec::validate() const {
  if (cell_width <= 0 || cell_height <= 0) {
    throw MeshError("mesh: cell dimensions must be positive");
  }
  if (rows <= 0 || cols <= 0) {
    throw MeshError("mesh: grid must have at least one row and column");
  }
  if (origin_x < 0 || origin_y < 0) {
    throw MeshError("mesh: origin must be non-negative");
  }
}

void MeshSpec::validate_for_frame(Index frame_width, Index frame_height) const {
  validate();
  const Index need_w = origin_x + cols * cell_width;
  const Index need_h = origin_y + rows * cell_height;
  if (need_w > frame_width || need_h > frame_height) {
    throw MeshError("mesh: grid of " + std::to_string(need_w) + "x" + std::to_string(need_h) +
                    " does not fit frame of " + std::to_string(frame_width) + "x" +
                    std::to_string(frame_height));
  }
}

std::vector<CellRect> mesh_cells(const MeshSpec& spec) {
  spec.validate();
  std::vector<CellRect> cells;
  cells.reserve(static_cast<std::size_t>(spec.cell_count()));
  for (Index r = 0; r < spec.rows; ++r) {
    for (Index c = 0; c < spec.cols; ++c) {
      cells.push_back({spec.origin_x + c * spec.cell_width, spec.origin_y + r * spec.cell_height,
                       spec.cell_width, spec.cell_height});
    }
  }
  return cells;
}

GrayImage extract_cell(const GrayImage& frame, const MeshSpec& spec, Index row, Index col) {
  spec.validate_for_frame(frame.cols(), frame.rows());
  if (row < 0 || row >= spec.rows || col < 0 || col >= spec.cols) {
    throw IndexError("extract_cell: cell (" + std::to_string(row) + ", " + std::to_string(col) +
                     ") outside " + std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
                     " grid");
  }
  const Index x = spec.origin_x + col * spec.cell_width;
  const Index y = spec.origin_y + row * spec.cell_height;
  return frame.block(y, x, spec.cell_height, spec.cell_width);
}

}  // namespace motoclass
