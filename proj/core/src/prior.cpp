#include "shapegram/prior.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "shapegram/rng.hpp"
#include "parallel.hpp"

namespace shapegram {

namespace {

int draw_type(const GrammarParams& p, std::mt19937_64& rng) {
  const double u = uniform_unit(rng);
  if (u < p.t0) return 0;
  if (u < p.t0 + p.t1) return 1;
  return 2;
}

void grow_node(DualTreeNode& node, int depth, const GrammarParams& p, const SamplerConfig& cfg,
               std::mt19937_64& rng) {
  node.type = depth >= cfg.max_depth ? 0 : draw_type(p, rng);
  if (node.type == 1) node.variant = uniform_unit(rng) < 0.5 ? 0 : 1;
  node.children.resize(node.type);
  for (auto& child : node.children) grow_node(child, depth + 1, p, cfg, rng);
}

Triangle make_child_triangle(int type, int variant, const GrowthEdge& edge, Point c) {
  if (type == 1 && variant == 1) return Triangle{type, c, edge.a, edge.b};
  return Triangle{type, edge.b, c, edge.a};
}

}  // namespace

int DualTreeNode::count_nodes() const {
  int n = 1;
  for (const auto& c : children) n += c.count_nodes();
  return n;
}

int DualTreeNode::count_of_type(int t) const {
  int n = type == t ? 1 : 0;
  for (const auto& c : children) n += c.count_of_type(t);
  return n;
}

int DualTreeNode::depth() const {
  int d = 0;
  for (const auto& c : children) d = std::max(d, 1 + c.depth());
  return d;
}

DualTreeNode sample_structure(const GrammarParams& params, const SamplerConfig& cfg,
                              std::mt19937_64& rng) {
  const GrammarParams p = checked(params);
  if (cfg.max_depth < 1) throw std::invalid_argument("sampler: max_depth must be >= 1");
  DualTreeNode root;
  root.type = draw_type(p, rng);
  root.children.resize(root.type + 1);  // the root grows on every edge
  for (auto& child : root.children) grow_node(child, 1, p, cfg, rng);
  return root;
}

std::vector<Point> vertex_candidates(const GrowthEdge& edge, const SamplerConfig& cfg) {
  if (cfg.radius_steps < 1 || cfg.angle_steps < 1)
    throw std::invalid_argument("sampler: candidate steps must be positive");
  const double len = norm(edge.b - edge.a);
  if (len == 0.0) throw std::invalid_argument("sampler: degenerate growth edge");
  const Point mid = 0.5 * (edge.a + edge.b);
  const Point u = (1.0 / len) * (edge.b - edge.a);
  const Point v{-u.y, u.x};  // left normal of a->b

  const double r_min = 0.2 * len, r_max = 3.0 * len;
  std::vector<double> radii(cfg.radius_steps);
  if (cfg.radius_steps == 1) {
    radii[0] = std::sqrt(r_min * r_max);
  } else {
    const double step = std::log(r_max / r_min) / (cfg.radius_steps - 1);
    for (int i = 0; i < cfg.radius_steps; ++i) radii[i] = r_min * std::exp(step * i);
  }

  std::vector<Point> candidates;
  candidates.reserve(static_cast<std::size_t>(cfg.radius_steps) * cfg.angle_steps);
  for (int i = 0; i < cfg.radius_steps; ++i) {
    for (int k = 0; k < cfg.angle_steps; ++k) {
      const double theta = std::numbers::pi * (k + 0.5) / cfg.angle_steps;
      const Point dir = std::cos(theta) * u + std::sin(theta) * v;
      candidates.push_back(mid + radii[i] * dir);
    }
  }
  return candidates;
}

namespace {

Point draw_candidate(int type, int variant, bool root, const GrowthEdge& edge,
                     const GrammarParams& params, const SamplerConfig& cfg,
                     std::mt19937_64& rng) {
  const std::vector<Point> candidates = vertex_candidates(edge, cfg);
  std::vector<double> logw(candidates.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Triangle t = root ? Triangle{type, edge.a, edge.b, candidates[i]}
                            : make_child_triangle(type, variant, edge, candidates[i]);
    logw[i] = log_shape_score(type, t.x0, t.x1, t.x2, params);
    max_log = std::max(max_log, logw[i]);
  }
  if (!std::isfinite(max_log)) throw std::runtime_error("sampler: all vertex candidates scored zero");
  std::vector<double> w(candidates.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(logw[i] - max_log);
  const std::size_t pick = sample_discrete(w, rng);
  if (pick >= candidates.size()) throw std::runtime_error("sampler: empty vertex proposal");
  return candidates[pick];
}

}  // namespace

Point sample_vertex(int type, const GrowthEdge& edge, const GrammarParams& params,
                    const SamplerConfig& cfg, std::mt19937_64& rng, int variant) {
  return draw_candidate(type, variant, /*root=*/false, edge, params, cfg, rng);
}

Point sample_root_vertex(int root_type, const GrowthEdge& seed, const GrammarParams& params,
                         const SamplerConfig& cfg, std::mt19937_64& rng) {
  return draw_candidate(root_type, 0, /*root=*/true, seed, params, cfg, rng);
}

TriangulatedPolygon sample_shape(const GrammarParams& params, const SamplerConfig& cfg,
                                 std::mt19937_64& rng, const GrowthEdge& seed_edge) {
  const GrammarParams p = checked(params);
  const DualTreeNode structure = sample_structure(p, cfg, rng);

  TriangulatedPolygon shape;
  const Point root_c = sample_root_vertex(structure.type, seed_edge, p, cfg, rng);
  shape.nodes.push_back({Triangle{structure.type, seed_edge.a, seed_edge.b, root_c}, -1, 0, {}});

  struct Pending {
    GrowthEdge edge;
    const DualTreeNode* node;
    int parent;
  };
  std::deque<Pending> queue;
  {
    const auto edges = growth_edges(shape.nodes[0].tri, /*is_root=*/true, 0);
    for (std::size_t k = 0; k < edges.size(); ++k)
      queue.push_back({edges[k], &structure.children[k], 0});
  }
  while (!queue.empty()) {
    const Pending item = queue.front();
    queue.pop_front();
    const DualTreeNode& node = *item.node;
    const Point c = sample_vertex(node.type, item.edge, p, cfg, rng, node.variant);
    const Triangle tri = make_child_triangle(node.type, node.variant, item.edge, c);
    const int idx = shape.size();
    shape.nodes.push_back({tri, item.parent, node.variant, {}});
    shape.nodes[item.parent].children.push_back(idx);
    const auto edges = growth_edges(tri, /*is_root=*/false, node.variant);
    for (std::size_t k = 0; k < edges.size(); ++k)
      queue.push_back({edges[k], &node.children[k], idx});
  }
  return shape;
}

EmpiricalStats empirical_stats(const GrammarParams& params, const SamplerConfig& cfg,
                               long long n_samples) {
  if (n_samples < 1) throw std::invalid_argument("empirical_stats: need at least one sample");
  const GrammarParams p = checked(params);

  struct Partial {
    double sum_n = 0, sum_n2 = 0, sum_j = 0, sum_j2 = 0, sum_e = 0, sum_b = 0;
    long long capped = 0;
  };
  const long long grain = 4096;
  std::vector<Partial> partials((n_samples + grain - 1) / grain);
  detail::parallel_chunks(n_samples, grain, [&](long long chunk, long long begin, long long end) {
    Partial acc;
    for (long long i = begin; i < end; ++i) {
      std::mt19937_64 rng = make_engine(cfg.seed, static_cast<std::uint64_t>(i));
      const DualTreeNode tree = sample_structure(p, cfg, rng);
      const double n = tree.count_nodes();
      const double j = tree.count_of_type(2);
      acc.sum_n += n;
      acc.sum_n2 += n * n;
      acc.sum_j += j;
      acc.sum_j2 += j * j;
      acc.sum_e += tree.count_of_type(0);
      acc.sum_b += tree.count_of_type(1);
      if (tree.depth() >= cfg.max_depth) ++acc.capped;
    }
    partials[chunk] = acc;
  });

  Partial total;
  for (const Partial& part : partials) {
    total.sum_n += part.sum_n;
    total.sum_n2 += part.sum_n2;
    total.sum_j += part.sum_j;
    total.sum_j2 += part.sum_j2;
    total.sum_e += part.sum_e;
    total.sum_b += part.sum_b;
    total.capped += part.capped;
  }

  const double n = static_cast<double>(n_samples);
  EmpiricalStats stats;
  stats.samples = n_samples;
  stats.capped = total.capped;
  stats.mean_triangles = total.sum_n / n;
  stats.mean_junctions = total.sum_j / n;
  stats.mean_ends = total.sum_e / n;
  stats.mean_branches = total.sum_b / n;
  if (n_samples > 1) {
    const double var_n =
        std::max(0.0, (total.sum_n2 - n * stats.mean_triangles * stats.mean_triangles) / (n - 1));
    const double var_j =
        std::max(0.0, (total.sum_j2 - n * stats.mean_junctions * stats.mean_junctions) / (n - 1));
    stats.se_triangles = std::sqrt(var_n / n);
    stats.se_junctions = std::sqrt(var_j / n);
  }
  return stats;
}

}  // namespace shapegram
