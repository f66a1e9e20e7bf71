#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shapegram/grid.hpp"
#include "shapegram/image.hpp"

// Precomputed gradient line integrals for every admissible grid edge.
// Values are unoriented and stored once per unordered pair; lookups work
// for both orders.

namespace shapegram {

class EdgeScoreTable {
 public:
  EdgeScoreTable(std::shared_ptr<const EdgeIndex> index, std::vector<double> values);

  const EdgeIndex& index() const { return *index_; }
  std::shared_ptr<const EdgeIndex> index_ptr() const { return index_; }

  // Integral for the unordered pair {a,b} of grid point indices; throws
  // std::out_of_range if the pair is not admissible (not in the length
  // band [1, max_edge_len]).
  double value(int a_idx, int b_idx) const;

  // Fast path used by the inference inner loops: point + displacement.
  double value_at(int a_idx, int disp) const {
    return values_[static_cast<std::size_t>(index_->unordered_slot(a_idx, disp))];
  }

  // Number of admissible unordered pairs actually stored.
  std::size_t pair_count() const;

 private:
  std::shared_ptr<const EdgeIndex> index_;
  std::vector<double> values_;  // canonical (unordered) slots; others unused
};

// Computes edge_integral for every unordered admissible pair, in pixel
// coordinates via the grid-to-image map. Parallel over grid points;
// output is deterministic.
EdgeScoreTable precompute_edge_table(std::shared_ptr<const EdgeIndex> index,
                                     const GridToImageMap& map, const GradientField& grad,
                                     const LikelihoodConfig& cfg);

// log pi for a triangle with grid-coordinate vertices: lambda times the
// sum of the boundary-edge integrals. Type 2 triangles have no boundary
// edges and always score 0.
double triangle_log_likelihood(int type, Point x0, Point x1, Point x2,
                               const EdgeScoreTable& table, const LikelihoodConfig& cfg);
double triangle_log_likelihood(const Triangle& t, const EdgeScoreTable& table,
                               const LikelihoodConfig& cfg);

// Little-endian binary cache keyed by image and configuration hashes.
// Layout: magic "SGTB", u32 version, u64 image_hash, u64 config_hash,
// i32 grid width/height, i32 max_edge_len, u64 value count, then raw
// IEEE-754 doubles in slot order.
void save_edge_table(const EdgeScoreTable& table, const std::string& path,
                     std::uint64_t image_hash, std::uint64_t config_hash);

// Returns nullopt if the file is missing or any key disagrees.
std::optional<EdgeScoreTable> load_edge_table(const std::string& path,
                                              std::shared_ptr<const EdgeIndex> index,
                                              std::uint64_t image_hash,
                                              std::uint64_t config_hash);

}  // namespace shapegram
