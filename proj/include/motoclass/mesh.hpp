#pragma once

#include "motoclass/types.hpp"

#include <vector>

namespace motoclass {

/// Axis-aligned pixel rectangle; (x, y) is the top-left corner.
struct CellRect {
  Index x = 0;
  Index y = 0;
  Index width = 0;
  Index height = 0;
};

/// A rows x cols grid of fixed-size cells tiled from (origin_x, origin_y).
/// Defaults give the 3x8 grid of 210x120 cells used for frame extraction.
struct MeshSpec {
  Index cell_width = 210;
  Index cell_height = 120;
  Index rows = 3;
  Index cols = 8;
  Index origin_x = 0;
  Index origin_y = 0;

  Index cell_count() const { return rows * cols; }

  /// Throws MeshError unless all counts are positive and the origin is
  /// non-negative.
  void validate() const;

  /// Additionally requires the full grid to fit inside a frame of the given
  /// size. Throws MeshError otherwise.
  void validate_for_frame(Index frame_width, Index frame_height) const;
};

/// All rows*cols cell rectangles in row-major order. Cells tile without
/// overlap: cell (r, c) starts at (origin_x + c*cell_width,
/// origin_y + r*cell_height).
std::vector<CellRect> mesh_cells(const MeshSpec& spec);

/// Copies cell (row, col) out of the frame. The result is exactly
/// cell_width x cell_height. Throws IndexError for out-of-range indices and
/// MeshError if the mesh does not fit the frame.
GrayImage extract_cell(const GrayImage& frame, const MeshSpec& spec, Index row, Index col);

}  // namespace motoclass
