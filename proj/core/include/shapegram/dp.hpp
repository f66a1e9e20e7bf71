#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shapegram/edge_table.hpp"
#include "shapegram/grammar.hpp"
#include "shapegram/grid.hpp"
#include "shapegram/image.hpp"
#include "shapegram/prior.hpp"

// Exact posterior inference over grid-constrained, depth-bounded shapes.
//
// The backward weight of a directed admissible edge at level j is the
// total posterior mass of all completed subtrees of depth <= j growing
// from that edge. Level 0 is zero everywhere; level j sums, over
// candidate vertices c strictly left of the edge (a,b) and within the
// length band of both endpoints, the four production cases
//
//   type 0:        t0     * s0(b,c,a) * pi0(b,c,a)
//   type 1 side A: (t1/2) * s1(b,c,a) * pi1(b,c,a) * V[j-1](a,c)
//   type 1 side B: (t1/2) * s1(c,a,b) * pi1(c,a,b) * V[j-1](c,b)
//   type 2:        t2     * s2(b,c,a) *              V[j-1](a,c) * V[j-1](c,b)
//
// where s is the shape-selection probability (shape score normalized
// over the edge's candidate set per case) and log pi is lambda times the
// triangle's boundary-edge integrals. All arithmetic is in log space
// with compensated log-sum-exp accumulation. Root marginals and
// ancestral child conditionals use the same weights, so sampling is
// exact.

namespace shapegram {

struct ChildTerm {
  int type = 0;
  int variant = 0;     // type-1 glue side
  Point vertex;        // grid coordinates of c
  double log_weight = 0.0;      // conditional weight, includes V factors
  double log_production = 0.0;  // production weight without V factors
};

class DPTables {
 public:
  struct Impl;

  int depth() const;
  const EdgeIndex& index() const;
  const GrammarParams& params() const;
  const LikelihoodConfig& likelihood() const;

  // log V_level(a->b) for grid points a, b; -infinity encodes zero mass.
  // Throws std::out_of_range for non-admissible edges.
  double log_weight(int level, Point a, Point b) const;

  std::shared_ptr<const Impl> impl;
};

// Runs the recursion for levels 1..depth over the table's grid and edge
// index. Parallel within a level; results are bitwise deterministic
// regardless of thread count.
DPTables compute_backward_weights(const GrammarParams& params, const EdgeScoreTable& table,
                                  const LikelihoodConfig& cfg, int depth);

// Discrete posterior over root triangles (type, x0, x1, x2) with grid
// vertices, marginalized over all completions of depth <= d:
//
//   type 0: t0 * s0(a,b,c) * pi0(a,b,c) * V[d](a,c)
//   type 1: t1 * s1(a,b,c) * pi1(a,b,c) * V[d](a,c) * V[d](c,b)
//   type 2: t2 * s2(a,b,c) *              V[d](a,c) * V[d](c,b) * V[d](b,a)
//
// over ordered triples with c strictly left of (a,b), normalized
// globally. Sampling is exact via a two-stage draw (edge, then triple).
class RootMarginal {
 public:
  RootMarginal(std::shared_ptr<const DPTables::Impl> impl, std::vector<double> edge_log_mass,
               double total_log_mass);

  double total_log_mass() const { return total_log_mass_; }
  // Normalized log probability of a root triangle; -infinity outside the
  // support.
  double log_prob(const Triangle& root) const;
  // Unnormalized log production weight of a root triangle (no V factors).
  double log_production(const Triangle& root) const;
  Triangle sample(std::mt19937_64& rng) const;

  const DPTables::Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const DPTables::Impl> impl_;
  std::vector<double> edge_log_mass_;   // per directed edge slot
  std::vector<double> edge_cumulative_; // stage-1 CDF
  double total_log_mass_ = 0.0;
};

// Throws std::runtime_error if the total posterior mass is zero (for
// example if depth is too small for any complete shape).
RootMarginal root_marginal(const DPTables& tables);

Triangle sample_root(const RootMarginal& marginal, std::mt19937_64& rng);

// The four-case conditional for growing a triangle at distance
// depth_from_root (1..d) on `edge`; weights use V[d - depth_from_root]
// exactly as in the recursion. Empty only if the tables are inconsistent
// with the edge.
std::vector<ChildTerm> child_conditional(const GrowthEdge& edge, int depth_from_root,
                                         const DPTables& tables);

// Draws one case from the conditional; throws std::runtime_error on zero
// total conditional weight.
ChildTerm sample_child(const GrowthEdge& edge, int depth_from_root, const DPTables& tables,
                       std::mt19937_64& rng);

// Ancestral sampling of one complete shape. If log_weight is non-null it
// receives the shape's normalized log posterior probability.
TriangulatedPolygon sample_shape_from_posterior(const DPTables& tables,
                                                const RootMarginal& marginal,
                                                std::mt19937_64& rng,
                                                double* log_weight = nullptr);

// Full pipeline: gradient, edge table, backward weights, root marginal,
// then n_samples ancestral draws with independent seed-derived streams.
// Shapes are returned in grid coordinates.
std::vector<TriangulatedPolygon> sample_posterior(int n_samples, const Grid& grid,
                                                  const GrammarParams& params,
                                                  const GrayImage& image,
                                                  const LikelihoodConfig& cfg, int depth,
                                                  int max_edge_len, std::uint64_t seed,
                                                  std::vector<double>* log_weights = nullptr);

// DP table cache, little-endian, keyed by image/config hashes. Layout:
// magic "SGDP", u32 version, u64 image_hash, u64 config_hash, i32 grid
// width/height, i32 max_edge_len, i32 depth, u64 per-level value count,
// then levels 0..depth as raw doubles in slot order.
void save_dp_tables(const DPTables& tables, const std::string& path, std::uint64_t image_hash,
                    std::uint64_t config_hash);
std::optional<DPTables> load_dp_tables(const std::string& path, const GrammarParams& params,
                                       const EdgeScoreTable& table, const LikelihoodConfig& cfg,
                                       int depth, std::uint64_t image_hash,
                                       std::uint64_t config_hash);

}  // namespace shapegram
