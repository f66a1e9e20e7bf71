#include "shapegram/grid.hpp"

#include <stdexcept>

namespace shapegram {

EdgeIndex::EdgeIndex(const Grid& grid, int max_edge_len) : grid_(grid), max_len_(max_edge_len) {
  if (grid.width < 3 || grid.height < 3)
    throw std::invalid_argument("grid must be at least 3x3");
  if (max_len_ < 1) throw std::invalid_argument("max edge length must be >= 1");

  span_ = 2 * max_len_ + 1;
  lookup_.assign(static_cast<std::size_t>(span_) * span_, -1);
  const long long max2 = static_cast<long long>(max_len_) * max_len_;
  for (int dy = -max_len_; dy <= max_len_; ++dy) {
    for (int dx = -max_len_; dx <= max_len_; ++dx) {
      const long long len2 = static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy;
      if (len2 >= 1 && len2 <= max2) {
        lookup_[(dy + max_len_) * span_ + (dx + max_len_)] =
            static_cast<int>(offsets_.size());
        offsets_.push_back({dx, dy});
      }
    }
  }
  reverse_.resize(offsets_.size());
  delta_.resize(offsets_.size());
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    reverse_[i] = displacement_index(-offsets_[i].dx, -offsets_[i].dy);
    delta_[i] = offsets_[i].dy * grid_.width + offsets_[i].dx;
  }
}

long long EdgeIndex::edge_slot(int a_idx, int b_idx) const {
  const int dx = grid_.col(b_idx) - grid_.col(a_idx);
  const int dy = grid_.row(b_idx) - grid_.row(a_idx);
  const int disp = displacement_index(dx, dy);
  return disp < 0 ? -1 : slot(a_idx, disp);
}

}  // namespace shapegram
