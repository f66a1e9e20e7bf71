#pragma once

#include <functional>
#include <vector>

#include "shapegram/dp.hpp"

// Brute-force enumeration of the depth-bounded posterior on tiny
// instances, used to validate the dynamic program. Backward sums are
// obtained by explicitly visiting every completed subtree (no value
// reuse across levels and no shared candidate tables: candidate sets,
// normalizers and image terms are all recomputed from first principles).
// Root masses combine the enumerated per-edge sums across the root's
// independent subtrees.

namespace shapegram {

class PosteriorOracle {
 public:
  // Throws std::invalid_argument if grid exceeds 5x5 or depth exceeds 3
  // (the enumeration is exponential in depth).
  PosteriorOracle(const Grid& grid, const GrammarParams& params, const GrayImage& image,
                  const LikelihoodConfig& cfg, int depth, int max_edge_len);

  int depth() const { return depth_; }

  // Enumerated sum over completed subtrees of depth <= level growing
  // from a->b (linear space, unnormalized).
  double backward_sum(int level, Point a, Point b) const;

  // Unnormalized root mass and the total over all roots.
  double root_mass(const Triangle& root) const;
  double total_mass() const { return total_mass_; }
  // Normalized root marginal probability.
  double root_prob(const Triangle& root) const { return root_mass(root) / total_mass_; }

  // All support roots with positive mass.
  std::vector<Triangle> support_roots() const;

  // Exact normalized log probability of a complete shape (grid
  // coordinates); -infinity outside the support.
  double shape_log_prob(const TriangulatedPolygon& shape) const;

  // The four-case child conditional at a growth edge, as (term, weight)
  // pairs mirroring child_conditional(); weights are unnormalized.
  std::vector<ChildTerm> child_conditional(const GrowthEdge& edge, int depth_from_root) const;

  // Explicitly enumerates complete shapes with their unnormalized
  // weights. Only tractable for depth 1 instances; the callback receives
  // each shape and its linear weight.
  void for_each_complete_shape(
      const std::function<void(const TriangulatedPolygon&, double)>& fn) const;

 private:
  struct CandidateInfo;

  std::vector<Point> candidates(Point a, Point b) const;
  bool admissible(Point p, Point q) const;
  double log_pi_edge(Point p, Point q) const;  // lambda * integral
  // Production log weights for the four cases and the root cases.
  double child_log_production(int type, int variant, const GrowthEdge& edge, Point c) const;
  double root_log_production(const Triangle& root) const;
  template <class Fn>
  void visit_subtrees(Point a, Point b, int budget, double log_prefix, Fn&& fn) const;

  Grid grid_;
  GrammarParams params_;
  LikelihoodConfig cfg_;
  GradientField grad_;
  GridToImageMap map_;
  int depth_ = 1;
  int max_len_ = 8;
  double log_root_norm_[3] = {0, 0, 0};
  // backward sums indexed by [level][a_idx * N + b_idx]
  std::vector<std::vector<double>> sums_;
  double total_mass_ = 0.0;
};

// Factory matching the operation name used throughout the tests.
PosteriorOracle enumerate_posterior(const Grid& grid, const GrammarParams& params,
                                    const GrayImage& image, const LikelihoodConfig& cfg,
                                    int depth, int max_edge_len);

}  // namespace shapegram
