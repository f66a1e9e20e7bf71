#pragma once

#include <vector>

#include "shapegram/geometry.hpp"

// The finite vertex lattice for inference and its admissible-edge
// indexing. An admissible edge is an ordered pair of grid points whose
// length lies in [1, max_edge_len] (grid units). Directed edges are
// addressed as (point index, displacement index) slots so per-edge
// tables are flat arrays.

namespace shapegram {

struct Grid {
  int width = 40;   // vertex columns
  int height = 40;  // vertex rows

  int point_count() const { return width * height; }
  int index(int col, int row) const { return row * width + col; }
  int col(int idx) const { return idx % width; }
  int row(int idx) const { return idx / width; }
  bool contains(int col, int row) const {
    return col >= 0 && col < width && row >= 0 && row < height;
  }
  Point point(int idx) const {
    return {static_cast<double>(col(idx)), static_cast<double>(row(idx))};
  }
};

// Affine map from grid coordinates to image pixel coordinates: the grid
// covers the image with uniform spacing, inset by half a cell from each
// border. For an image whose pixel count per axis equals the grid size
// the map is the identity.
struct GridToImageMap {
  double cell_x = 1.0, cell_y = 1.0;

  static GridToImageMap for_image(const Grid& grid, int image_width, int image_height) {
    return {static_cast<double>(image_width) / grid.width,
            static_cast<double>(image_height) / grid.height};
  }
  Point to_pixel(Point grid_pt) const {
    return {(grid_pt.x + 0.5) * cell_x - 0.5, (grid_pt.y + 0.5) * cell_y - 0.5};
  }
};

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(Offset a, Offset b) { return a.dx == b.dx && a.dy == b.dy; }
};

class EdgeIndex {
 public:
  EdgeIndex(const Grid& grid, int max_edge_len);

  const Grid& grid() const { return grid_; }
  int max_edge_len() const { return max_len_; }

  int displacement_count() const { return static_cast<int>(offsets_.size()); }
  const std::vector<Offset>& displacements() const { return offsets_; }

  // Index of (dx,dy) among admissible displacements, or -1.
  int displacement_index(int dx, int dy) const {
    if (dx < -max_len_ || dx > max_len_ || dy < -max_len_ || dy > max_len_) return -1;
    return lookup_[(dy + max_len_) * span_ + (dx + max_len_)];
  }
  int reverse_index(int disp) const { return reverse_[disp]; }
  // Point-index delta of a displacement (valid only when in-grid).
  int point_delta(int disp) const { return delta_[disp]; }

  long long slot_count() const {
    return static_cast<long long>(grid_.point_count()) * displacement_count();
  }
  long long slot(int point_idx, int disp) const {
    return static_cast<long long>(point_idx) * displacement_count() + disp;
  }
  // Slot of the directed edge a->b; -1 if not admissible.
  long long edge_slot(int a_idx, int b_idx) const;

  bool endpoint_in_grid(int point_idx, int disp) const {
    const Offset o = offsets_[disp];
    return grid_.contains(grid_.col(point_idx) + o.dx, grid_.row(point_idx) + o.dy);
  }

  // Canonical slot shared by both orders of an edge (used for symmetric
  // per-edge values): the direction starting at the smaller point index.
  long long unordered_slot(int a_idx, int disp) const {
    const int b_idx = a_idx + delta_[disp];
    if (a_idx <= b_idx) return slot(a_idx, disp);
    return slot(b_idx, reverse_[disp]);
  }

 private:
  Grid grid_;
  int max_len_ = 8;
  int span_ = 0;  // lookup table side length, 2*max_len+1
  std::vector<Offset> offsets_;
  std::vector<int> lookup_;
  std::vector<int> reverse_;
  std::vector<int> delta_;
};

}  // namespace shapegram
