#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "shapegram/grammar.hpp"

// Generative sampling of triangulated polygons.
//
// Structure first: the dual tree grows as a branching process where the
// root has 1, 2 or 3 children with probability t0, t1, t2 and every
// other node has 0, 1 or 2 children with the same probabilities. The two
// glue sides of a type-1 production are equally likely. Geometry second:
// each free vertex is drawn from a discrete polar proposal around its
// growth edge with weights proportional to the type's shape score, so
// the sampler is covariant under similarity transforms of the seed edge.

namespace shapegram {

struct SamplerConfig {
  int max_depth = 200;   // nodes at this depth are forced to type 0
  int radius_steps = 24; // geometric steps of the proposal radius in [0.2,3]*|ab|
  int angle_steps = 48;  // uniform steps of the proposal angle in (0,pi)
  std::uint64_t seed = 0;
};

struct DualTreeNode {
  int type = 0;
  int variant = 0;  // glue side for non-root type-1 nodes
  std::vector<DualTreeNode> children;

  int count_nodes() const;
  int count_of_type(int type) const;
  int depth() const;  // max node distance from this node
};

DualTreeNode sample_structure(const GrammarParams& params, const SamplerConfig& cfg,
                              std::mt19937_64& rng);

// The discrete polar candidate set for a growth edge: radii in
// [0.2,3]*|ab| (geometric), angles in (0,pi) (uniform midpoints), all
// strictly on the left of a->b, measured around the edge midpoint.
std::vector<Point> vertex_candidates(const GrowthEdge& edge, const SamplerConfig& cfg);

// Free vertex of a triangle of the given type/variant grown on `edge`,
// drawn proportionally to the type's shape score over the candidate set.
Point sample_vertex(int type, const GrowthEdge& edge, const GrammarParams& params,
                    const SamplerConfig& cfg, std::mt19937_64& rng, int variant = 0);

// Third vertex of a root triangle (x0,x1) = (seed.a, seed.b).
Point sample_root_vertex(int root_type, const GrowthEdge& seed, const GrammarParams& params,
                         const SamplerConfig& cfg, std::mt19937_64& rng);

// A full random shape: structure plus geometry, grown breadth-first from
// the seed edge (the root pose is a convention; the model is similarity
// invariant). Default seed edge: unit horizontal edge at the origin.
TriangulatedPolygon sample_shape(const GrammarParams& params, const SamplerConfig& cfg,
                                 std::mt19937_64& rng,
                                 const GrowthEdge& seed_edge = {{0.0, 0.0}, {1.0, 0.0}});

struct EmpiricalStats {
  double mean_triangles = 0.0, se_triangles = 0.0;
  double mean_junctions = 0.0, se_junctions = 0.0;
  double mean_ends = 0.0, mean_branches = 0.0;
  long long samples = 0;
  long long capped = 0;  // samples in which some node hit max_depth
};

// Monte Carlo structure statistics over n_samples independent trees
// (streams split from cfg.seed; parallel, order independent).
EmpiricalStats empirical_stats(const GrammarParams& params, const SamplerConfig& cfg,
                               long long n_samples);

}  // namespace shapegram
