#include "shapegram/grammar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shapegram {

std::array<std::array<Point, 3>, 3> GrammarParams::default_ideals() {
  const double h = std::sqrt(3.0) / 2.0;
  const std::array<Point, 3> equilateral = {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.5, h}};
  // Isosceles: boundary side 0.4, legs 1.
  const std::array<Point, 3> isosceles = {Point{0.0, 0.0}, Point{0.4, 0.0},
                                          Point{0.2, std::sqrt(1.0 - 0.04)}};
  return {equilateral, isosceles, equilateral};
}

std::optional<std::string> validate_params(const GrammarParams& p) {
  if (!(p.t0 >= 0.0) || !(p.t1 >= 0.0) || !(p.t2 >= 0.0))
    return "probability simplex violation: negative type probability";
  const double sum = p.t0 + p.t1 + p.t2;
  if (std::abs(sum - 1.0) > 1e-12)
    return "probability simplex violation: t0 + t1 + t2 = " + std::to_string(sum);
  if (!(p.t2 < p.t0))
    return "subcriticality violation: requires t2 < t0 (m = t1 + 2*t2 < 1)";
  if (!(p.k0 >= 0.0) || !(p.k1 >= 0.0) || !(p.k2 >= 0.0))
    return "negative shape stiffness";
  for (int i = 0; i < 3; ++i) {
    const auto& x = p.ideal_triangles[i];
    if (cross(x[1] - x[0], x[2] - x[0]) == 0.0)
      return "degenerate reference triangle for type " + std::to_string(i);
  }
  return std::nullopt;
}

GrammarParams checked(GrammarParams p) {
  if (auto err = validate_params(p)) throw std::invalid_argument("grammar params: " + *err);
  const double sum = p.t0 + p.t1 + p.t2;
  p.t0 /= sum;
  p.t1 /= sum;
  p.t2 /= sum;
  return p;
}

GrammarParams params_from_expectations(double en, double ej, GrammarParams base) {
  if (!(ej >= 0.0)) throw std::invalid_argument("expected junction count must satisfy E(j) >= 0");
  if (!(en >= 2.0)) throw std::invalid_argument("expected triangle count must satisfy E(n) >= 2");
  if (!(en >= 2.0 * ej + 2.0))
    throw std::invalid_argument("expected counts must satisfy E(n) >= 2*E(j) + 2");
  base.t0 = (2.0 + ej) / en;
  base.t1 = 1.0 - (2.0 * ej + 2.0) / en;
  base.t2 = ej / en;
  return checked(base);
}

StructureStats expected_counts(const GrammarParams& params) {
  const GrammarParams p = checked(params);
  StructureStats s;
  const double gap = p.t0 - p.t2;
  s.expected_triangles = 2.0 / gap;
  s.expected_junctions = 2.0 * p.t2 / gap;
  s.malthusian = p.t1 + 2.0 * p.t2;
  s.subtree_mean_nodes = 1.0 / gap;
  s.subtree_mean_junctions = p.t2 / gap;
  return s;
}

double log_shape_score(int type, Point x0, Point x1, Point x2, const GrammarParams& params) {
  if (cross(x1 - x0, x2 - x0) == 0.0) return -std::numeric_limits<double>::infinity();
  const double d = log_anisotropy(params.ideal(type), {x0, x1, x2});
  if (!std::isfinite(d)) return -std::numeric_limits<double>::infinity();
  return -params.stiffness(type) * d * d;
}

double shape_score(int type, Point x0, Point x1, Point x2, const GrammarParams& params) {
  const double ls = log_shape_score(type, x0, x1, x2, params);
  return std::isinf(ls) && ls < 0.0 ? 0.0 : std::exp(ls);
}

}  // namespace shapegram
