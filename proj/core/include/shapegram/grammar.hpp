#pragma once

#include <array>
#include <optional>
#include <string>

#include "shapegram/geometry.hpp"

// Grammar parameterization and the closed-form branching statistics.
//
// A triangle of type i is selected with probability t_i; the growth
// process is subcritical iff t2 < t0, i.e. the mean number of children
// m = t1 + 2*t2 is below one. Triangle shapes are scored against per-type
// reference triangles by the log-anisotropy distance.

namespace shapegram {

struct GrammarParams {
  double t0 = 0.15, t1 = 0.80, t2 = 0.05;  // type probabilities
  double k0 = 4.0, k1 = 4.0, k2 = 4.0;     // shape-score stiffness
  std::array<std::array<Point, 3>, 3> ideal_triangles = default_ideals();

  double type_prob(int type) const { return type == 0 ? t0 : type == 1 ? t1 : t2; }
  double stiffness(int type) const { return type == 0 ? k0 : type == 1 ? k1 : k2; }
  const std::array<Point, 3>& ideal(int type) const { return ideal_triangles[type]; }

  // Types 0 and 2 reference an equilateral triangle; type 1 an isosceles
  // one whose short side is the boundary edge (x0,x1), which favors
  // shapes with smooth boundaries.
  static std::array<std::array<Point, 3>, 3> default_ideals();
};

struct StructureStats {
  double expected_triangles = 0.0;    // E(n)
  double expected_junctions = 0.0;    // E(j)
  double malthusian = 0.0;            // m = t1 + 2*t2
  double subtree_mean_nodes = 0.0;    // mean node count of a non-root subtree
  double subtree_mean_junctions = 0.0;
};

// Empty result means the parameters are valid. Otherwise names the first
// violated invariant: simplex (t_i >= 0, sum 1 within 1e-12),
// subcriticality (t2 < t0 strictly), or a degenerate reference triangle.
std::optional<std::string> validate_params(const GrammarParams& params);

// validate_params + exact renormalization of (t0,t1,t2); throws
// std::invalid_argument on invalid input. Downstream code may assume the
// returned probabilities sum to exactly 1.
GrammarParams checked(GrammarParams params);

// Inverts the expectation formulas: given target mean triangle count
// E(n) and mean junction count E(j), returns the unique (t0,t1,t2).
// Requires E(j) >= 0, E(n) >= 2 and E(n) >= 2*E(j) + 2; throws
// std::invalid_argument naming the violated inequality.
GrammarParams params_from_expectations(double mean_triangles, double mean_junctions,
                                       GrammarParams base = GrammarParams{});

// Closed-form expectations: E(n) = 2/(t0-t2), E(j) = 2*t2/(t0-t2).
StructureStats expected_counts(const GrammarParams& params);

// Unnormalized shape weight exp(-k_i * d(X_i, X)^2) where d is the
// log-anisotropy to the type-i reference triangle; similarity invariant.
// Degenerate (collinear) vertices score 0 rather than raising, so weight
// sweeps can run over arbitrary point triples.
double shape_score(int type, Point x0, Point x1, Point x2, const GrammarParams& params);

// log(shape_score); -inf for degenerate triples.
double log_shape_score(int type, Point x0, Point x1, Point x2, const GrammarParams& params);

}  // namespace shapegram
