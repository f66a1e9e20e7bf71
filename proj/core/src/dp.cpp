#include "shapegram/dp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "shapegram/rng.hpp"
#include "parallel.hpp"

namespace shapegram {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& terms) {
  double max_term = kNegInf;
  for (double t : terms) max_term = std::max(max_term, t);
  if (!std::isfinite(max_term)) return kNegInf;
  detail::KahanSum sum;
  for (double t : terms) sum.add(std::exp(t - max_term));
  return max_term + std::log(sum.value());
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace

struct DPTables::Impl {
  GrammarParams params;
  LikelihoodConfig cfg;
  EdgeScoreTable table;
  int depth = 0;

  double lt0 = kNegInf, lt1 = kNegInf, lt1h = kNegInf, lt2 = kNegInf;

  // Per (growth displacement, candidate displacement) shape statics.
  // Shape scores are translation invariant on the lattice, so they are
  // shared by every edge with the same displacement.
  struct PairEntry {
    int disp_ac = -1;   // displacement of c relative to a
    int disp_cb = -1;   // displacement of b relative to c
    int delta_ac = 0;   // point-index delta of c
    int c_dx = 0, c_dy = 0;
    double ls0 = 0, ls1a = 0, ls1b = 0, ls2 = 0;     // child labelings
    double ls0r = 0, ls1r = 0, ls2r = 0;             // root labeling (a,b,c)
  };
  std::vector<std::vector<PairEntry>> rows;  // indexed by growth displacement

  // Per-slot log normalizers of the candidate shape scores, one per
  // production case; -inf marks an empty candidate set.
  std::vector<double> lz0, lz1a, lz1b, lz2;
  // Per-slot type-0 term of the recursion (independent of the level).
  std::vector<double> term0;
  // Global root shape normalizers per type.
  double lzr[3] = {kNegInf, kNegInf, kNegInf};

  std::vector<std::vector<double>> levels;  // log V; levels[0] is all -inf

  const EdgeIndex& index() const { return table.index(); }
  double lpi(int point_idx, int disp) const { return cfg.lambda * table.value_at(point_idx, disp); }

  bool in_grid(int col, int row) const { return index().grid().contains(col, row); }

  // Slot for the directed edge p->q given by grid points; -1 if not
  // admissible.
  long long slot_of(Point p, Point q) const {
    const Grid& grid = index().grid();
    const int pc = static_cast<int>(p.x), pr = static_cast<int>(p.y);
    const int qc = static_cast<int>(q.x), qr = static_cast<int>(q.y);
    if (p.x != pc || p.y != pr || q.x != qc || q.y != qr) return -1;
    if (!grid.contains(pc, pr) || !grid.contains(qc, qr)) return -1;
    const int disp = index().displacement_index(qc - pc, qr - pr);
    return disp < 0 ? -1 : index().slot(grid.index(pc, pr), disp);
  }
};

namespace {

using Impl = DPTables::Impl;
using PairEntry = Impl::PairEntry;

void build_pair_rows(Impl& impl) {
  const EdgeIndex& idx = impl.index();
  const int K = idx.displacement_count();
  impl.rows.resize(K);
  for (int d1 = 0; d1 < K; ++d1) {
    const Offset b = idx.displacements()[d1];
    auto& row = impl.rows[d1];
    for (int d2 = 0; d2 < K; ++d2) {
      const Offset c = idx.displacements()[d2];
      // c strictly left of a->b
      if (static_cast<long long>(b.dx) * c.dy - static_cast<long long>(b.dy) * c.dx <= 0)
        continue;
      const int disp_cb = idx.displacement_index(b.dx - c.dx, b.dy - c.dy);
      if (disp_cb < 0) continue;  // |cb| outside the length band

      PairEntry e;
      e.disp_ac = d2;
      e.disp_cb = disp_cb;
      e.delta_ac = idx.point_delta(d2);
      e.c_dx = c.dx;
      e.c_dy = c.dy;
      const Point pa{0.0, 0.0};
      const Point pb{static_cast<double>(b.dx), static_cast<double>(b.dy)};
      const Point pc{static_cast<double>(c.dx), static_cast<double>(c.dy)};
      e.ls0 = log_shape_score(0, pb, pc, pa, impl.params);
      e.ls1a = log_shape_score(1, pb, pc, pa, impl.params);
      e.ls1b = log_shape_score(1, pc, pa, pb, impl.params);
      e.ls2 = log_shape_score(2, pb, pc, pa, impl.params);
      e.ls0r = log_shape_score(0, pa, pb, pc, impl.params);
      e.ls1r = log_shape_score(1, pa, pb, pc, impl.params);
      e.ls2r = log_shape_score(2, pa, pb, pc, impl.params);
      row.push_back(e);
    }
  }
}

// Candidate-set normalizers, the level-independent type-0 terms, and the
// global root shape normalizers.
void build_normalizers(Impl& impl) {
  const EdgeIndex& idx = impl.index();
  const Grid& grid = idx.grid();
  const int K = idx.displacement_count();
  const long long slots = idx.slot_count();
  impl.lz0.assign(slots, kNegInf);
  impl.lz1a.assign(slots, kNegInf);
  impl.lz1b.assign(slots, kNegInf);
  impl.lz2.assign(slots, kNegInf);
  impl.term0.assign(slots, kNegInf);

  const long long grain = 4 * K;
  const long long chunks = (slots + grain - 1) / grain;
  std::vector<std::array<detail::KahanSum, 3>> root_partials(chunks);

  detail::parallel_chunks(slots, grain, [&](long long chunk, long long begin, long long end) {
    std::vector<double> t0_terms;
    auto& root_acc = root_partials[chunk];
    for (long long s = begin; s < end; ++s) {
      const int a = static_cast<int>(s / K);
      const int d1 = static_cast<int>(s % K);
      if (!idx.endpoint_in_grid(a, d1)) continue;
      const int a_col = grid.col(a), a_row = grid.row(a);
      // Shape scores are <= 1, so the plain sums cannot overflow.
      detail::KahanSum z0, z1a, z1b, z2;
      bool any = false;
      t0_terms.clear();
      for (const PairEntry& e : impl.rows[d1]) {
        if (!impl.in_grid(a_col + e.c_dx, a_row + e.c_dy)) continue;
        any = true;
        z0.add(std::exp(e.ls0));
        z1a.add(std::exp(e.ls1a));
        z1b.add(std::exp(e.ls1b));
        z2.add(std::exp(e.ls2));
        root_acc[0].add(std::exp(e.ls0r));
        root_acc[1].add(std::exp(e.ls1r));
        root_acc[2].add(std::exp(e.ls2r));
        const int c = a + e.delta_ac;
        t0_terms.push_back(e.ls0 + impl.lpi(c, e.disp_cb) + impl.lpi(a, e.disp_ac));
      }
      if (!any) continue;
      impl.lz0[s] = safe_log(z0.value());
      impl.lz1a[s] = safe_log(z1a.value());
      impl.lz1b[s] = safe_log(z1b.value());
      impl.lz2[s] = safe_log(z2.value());
      impl.term0[s] = impl.lt0 + log_sum_exp(t0_terms) - impl.lz0[s];
    }
  });

  for (int i = 0; i < 3; ++i) {
    detail::KahanSum total;
    for (long long c = 0; c < chunks; ++c) total.add(root_partials[c][i].value());
    impl.lzr[i] = safe_log(total.value());
  }
}

void run_levels(Impl& impl) {
  const EdgeIndex& idx = impl.index();
  const Grid& grid = idx.grid();
  const int K = idx.displacement_count();
  const long long slots = idx.slot_count();

  impl.levels.assign(impl.depth + 1, std::vector<double>(slots, kNegInf));
  for (int j = 1; j <= impl.depth; ++j) {
    const std::vector<double>& prev = impl.levels[j - 1];
    std::vector<double>& cur = impl.levels[j];
    detail::parallel_chunks(slots, 4 * K, [&](long long, long long begin, long long end) {
      std::vector<double> terms;
      for (long long s = begin; s < end; ++s) {
        const int a = static_cast<int>(s / K);
        const int d1 = static_cast<int>(s % K);
        if (!idx.endpoint_in_grid(a, d1)) continue;
        const int a_col = grid.col(a), a_row = grid.row(a);
        terms.clear();
        if (std::isfinite(impl.term0[s])) terms.push_back(impl.term0[s]);
        for (const PairEntry& e : impl.rows[d1]) {
          if (!impl.in_grid(a_col + e.c_dx, a_row + e.c_dy)) continue;
          const int c = a + e.delta_ac;
          const double v_ac = prev[idx.slot(a, e.disp_ac)];
          const double v_cb = prev[idx.slot(c, e.disp_cb)];
          if (std::isfinite(v_ac)) {
            terms.push_back(impl.lt1h + e.ls1a - impl.lz1a[s] + impl.lpi(c, e.disp_cb) + v_ac);
            if (std::isfinite(v_cb))
              terms.push_back(impl.lt2 + e.ls2 - impl.lz2[s] + v_ac + v_cb);
          }
          if (std::isfinite(v_cb))
            terms.push_back(impl.lt1h + e.ls1b - impl.lz1b[s] + impl.lpi(a, e.disp_ac) + v_cb);
        }
        cur[s] = log_sum_exp(terms);
      }
    });
  }
}

std::shared_ptr<Impl> build_impl(const GrammarParams& params, const EdgeScoreTable& table,
                                 const LikelihoodConfig& cfg, int depth, bool compute_levels) {
  if (depth < 1) throw std::invalid_argument("backward weights: depth must be >= 1");
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("backward weights: lambda must be >= 0");
  auto impl = std::make_shared<Impl>(Impl{checked(params), cfg, table, depth});
  impl->lt0 = safe_log(impl->params.t0);
  impl->lt1 = safe_log(impl->params.t1);
  impl->lt1h = safe_log(impl->params.t1 / 2.0);
  impl->lt2 = safe_log(impl->params.t2);
  build_pair_rows(*impl);
  build_normalizers(*impl);
  if (compute_levels) run_levels(*impl);
  return impl;
}

}  // namespace

int DPTables::depth() const { return impl->depth; }
const EdgeIndex& DPTables::index() const { return impl->index(); }
const GrammarParams& DPTables::params() const { return impl->params; }
const LikelihoodConfig& DPTables::likelihood() const { return impl->cfg; }

double DPTables::log_weight(int level, Point a, Point b) const {
  if (level < 0 || level > impl->depth)
    throw std::out_of_range("backward weights: level out of range");
  const long long s = impl->slot_of(a, b);
  if (s < 0) throw std::out_of_range("backward weights: edge is not admissible");
  return impl->levels[level][s];
}

DPTables compute_backward_weights(const GrammarParams& params, const EdgeScoreTable& table,
                                  const LikelihoodConfig& cfg, int depth) {
  return DPTables{build_impl(params, table, cfg, depth, /*compute_levels=*/true)};
}

namespace {

// Appends the root-triangle terms for the directed edge slot (a,d1).
// Each term carries (type, candidate entry) context via the callback.
template <class Fn>
void for_each_root_term(const Impl& impl, long long s, Fn&& fn) {
  const EdgeIndex& idx = impl.index();
  const Grid& grid = idx.grid();
  const int K = idx.displacement_count();
  const int a = static_cast<int>(s / K);
  const int d1 = static_cast<int>(s % K);
  if (!idx.endpoint_in_grid(a, d1)) return;
  const int a_col = grid.col(a), a_row = grid.row(a);
  const int b = a + idx.point_delta(d1);
  const std::vector<double>& vd = impl.levels[impl.depth];
  const double lpi_ab = impl.lpi(a, d1);
  const int d1_rev = idx.reverse_index(d1);

  for (const PairEntry& e : impl.rows[d1]) {
    if (!impl.in_grid(a_col + e.c_dx, a_row + e.c_dy)) continue;
    const int c = a + e.delta_ac;
    const double v_ac = vd[idx.slot(a, e.disp_ac)];
    const double v_cb = vd[idx.slot(c, e.disp_cb)];
    const double v_ba = vd[idx.slot(b, d1_rev)];
    const double lpi_bc = impl.lpi(c, e.disp_cb);
    if (std::isfinite(v_ac)) {
      const double prod0 = impl.lt0 + e.ls0r - impl.lzr[0] + lpi_ab + lpi_bc;
      fn(0, e, prod0, prod0 + v_ac);
      if (std::isfinite(v_cb)) {
        const double prod1 = impl.lt1 + e.ls1r - impl.lzr[1] + lpi_ab;
        fn(1, e, prod1, prod1 + v_ac + v_cb);
        if (std::isfinite(v_ba)) {
          const double prod2 = impl.lt2 + e.ls2r - impl.lzr[2];
          fn(2, e, prod2, prod2 + v_ac + v_cb + v_ba);
        }
      }
    }
  }
}

}  // namespace

RootMarginal::RootMarginal(std::shared_ptr<const DPTables::Impl> impl,
                           std::vector<double> edge_log_mass, double total_log_mass)
    : impl_(std::move(impl)),
      edge_log_mass_(std::move(edge_log_mass)),
      total_log_mass_(total_log_mass) {
  edge_cumulative_.resize(edge_log_mass_.size());
  detail::KahanSum acc;
  for (std::size_t s = 0; s < edge_log_mass_.size(); ++s) {
    if (std::isfinite(edge_log_mass_[s])) acc.add(std::exp(edge_log_mass_[s] - total_log_mass_));
    edge_cumulative_[s] = acc.value();
  }
}

RootMarginal root_marginal(const DPTables& tables) {
  const Impl& impl = *tables.impl;
  const long long slots = impl.index().slot_count();
  std::vector<double> mass(slots, kNegInf);
  detail::parallel_chunks(slots, 4 * impl.index().displacement_count(),
                          [&](long long, long long begin, long long end) {
                            std::vector<double> terms;
                            for (long long s = begin; s < end; ++s) {
                              terms.clear();
                              for_each_root_term(impl, s,
                                                 [&](int, const PairEntry&, double, double w) {
                                                   terms.push_back(w);
                                                 });
                              if (!terms.empty()) mass[s] = log_sum_exp(terms);
                            }
                          });
  std::vector<double> finite;
  finite.reserve(mass.size());
  for (double m : mass)
    if (std::isfinite(m)) finite.push_back(m);
  const double total = log_sum_exp(finite);
  if (!std::isfinite(total))
    throw std::runtime_error(
        "root marginal: total posterior mass is zero (depth too small or grid too tight)");
  return RootMarginal(tables.impl, std::move(mass), total);
}

namespace {

Triangle root_triangle_at(const Impl& impl, long long s, int type, const PairEntry& e) {
  const EdgeIndex& idx = impl.index();
  const Grid& grid = idx.grid();
  const int K = idx.displacement_count();
  const int a = static_cast<int>(s / K);
  const int d1 = static_cast<int>(s % K);
  const Point pa = grid.point(a);
  const Offset b = idx.displacements()[d1];
  return Triangle{type, pa, {pa.x + b.dx, pa.y + b.dy}, {pa.x + e.c_dx, pa.y + e.c_dy}};
}

}  // namespace

Triangle RootMarginal::sample(std::mt19937_64& rng) const {
  const double u = uniform_unit(rng) * edge_cumulative_.back();
  const auto it = std::upper_bound(edge_cumulative_.begin(), edge_cumulative_.end(), u);
  long long s = it == edge_cumulative_.end()
                    ? static_cast<long long>(edge_cumulative_.size()) - 1
                    : static_cast<long long>(it - edge_cumulative_.begin());
  while (s > 0 && !std::isfinite(edge_log_mass_[s])) --s;

  struct Case {
    int type;
    const PairEntry* entry;
  };
  std::vector<Case> cases;
  std::vector<double> weights;
  for_each_root_term(*impl_, s, [&](int type, const PairEntry& e, double, double w) {
    cases.push_back({type, &e});
    weights.push_back(std::exp(w - edge_log_mass_[s]));
  });
  const std::size_t pick = sample_discrete(weights, rng);
  if (pick >= cases.size()) throw std::runtime_error("root marginal: inconsistent edge mass");
  return root_triangle_at(*impl_, s, cases[pick].type, *cases[pick].entry);
}

namespace {

// Recomputes the single root term for an explicit triangle; returns
// {production, weight} or nullopt outside the support.
std::optional<std::pair<double, double>> root_term(const Impl& impl, const Triangle& root) {
  const EdgeIndex& idx = impl.index();
  const long long s = impl.slot_of(root.x0, root.x1);
  if (s < 0 || root.type < 0 || root.type > 2) return std::nullopt;
  const long long s_ac = impl.slot_of(root.x0, root.x2);
  const long long s_cb = impl.slot_of(root.x2, root.x1);
  if (s_ac < 0 || s_cb < 0) return std::nullopt;
  if (!is_valid_placement(root.x0, root.x1, root.x2)) return std::nullopt;

  const std::vector<double>& vd = impl.levels[impl.depth];
  const int K = idx.displacement_count();
  const double lpi_ab = impl.lpi(static_cast<int>(s / K), static_cast<int>(s % K));
  double production, weight;
  if (root.type == 0) {
    // {b,c} is the reverse of the (c,b) slot; the table value is unoriented.
    const double lpi_bc = impl.lpi(static_cast<int>(s_cb / K), static_cast<int>(s_cb % K));
    production = impl.lt0 + log_shape_score(0, root.x0, root.x1, root.x2, impl.params) -
                 impl.lzr[0] + lpi_ab + lpi_bc;
    weight = production + vd[s_ac];
  } else if (root.type == 1) {
    production = impl.lt1 + log_shape_score(1, root.x0, root.x1, root.x2, impl.params) -
                 impl.lzr[1] + lpi_ab;
    weight = production + vd[s_ac] + vd[s_cb];
  } else {
    const long long s_ba = impl.slot_of(root.x1, root.x0);
    production = impl.lt2 + log_shape_score(2, root.x0, root.x1, root.x2, impl.params) -
                 impl.lzr[2];
    weight = production + vd[s_ac] + vd[s_cb] + vd[s_ba];
  }
  return std::make_pair(production, weight);
}

}  // namespace

double RootMarginal::log_prob(const Triangle& root) const {
  const auto term = root_term(*impl_, root);
  return term ? term->second - total_log_mass_ : kNegInf;
}

double RootMarginal::log_production(const Triangle& root) const {
  const auto term = root_term(*impl_, root);
  return term ? term->first : kNegInf;
}

Triangle sample_root(const RootMarginal& marginal, std::mt19937_64& rng) {
  return marginal.sample(rng);
}

std::vector<ChildTerm> child_conditional(const GrowthEdge& edge, int depth_from_root,
                                         const DPTables& tables) {
  const Impl& impl = *tables.impl;
  if (depth_from_root < 1 || depth_from_root > impl.depth)
    throw std::invalid_argument("child conditional: depth out of range");
  const long long s = impl.slot_of(edge.a, edge.b);
  if (s < 0) throw std::out_of_range("child conditional: edge is not admissible");

  const EdgeIndex& idx = impl.index();
  const Grid& grid = idx.grid();
  const int K = idx.displacement_count();
  const int a = static_cast<int>(s / K);
  const int d1 = static_cast<int>(s % K);
  if (!idx.endpoint_in_grid(a, d1)) return {};
  const int a_col = grid.col(a), a_row = grid.row(a);
  const std::vector<double>& v = impl.levels[impl.depth - depth_from_root];

  std::vector<ChildTerm> out;
  for (const PairEntry& e : impl.rows[d1]) {
    if (!impl.in_grid(a_col + e.c_dx, a_row + e.c_dy)) continue;
    const int c = a + e.delta_ac;
    const Point pc{edge.a.x + e.c_dx, edge.a.y + e.c_dy};
    const double v_ac = v[idx.slot(a, e.disp_ac)];
    const double v_cb = v[idx.slot(c, e.disp_cb)];
    const double lpi_bc = impl.lpi(c, e.disp_cb);
    const double lpi_ca = impl.lpi(a, e.disp_ac);

    const double prod0 = impl.lt0 + e.ls0 - impl.lz0[s] + lpi_bc + lpi_ca;
    out.push_back({0, 0, pc, prod0, prod0});
    if (std::isfinite(v_ac)) {
      const double prod = impl.lt1h + e.ls1a - impl.lz1a[s] + lpi_bc;
      out.push_back({1, 0, pc, prod + v_ac, prod});
    }
    if (std::isfinite(v_cb)) {
      const double prod = impl.lt1h + e.ls1b - impl.lz1b[s] + lpi_ca;
      out.push_back({1, 1, pc, prod + v_cb, prod});
    }
    if (std::isfinite(v_ac) && std::isfinite(v_cb)) {
      const double prod = impl.lt2 + e.ls2 - impl.lz2[s];
      out.push_back({2, 0, pc, prod + v_ac + v_cb, prod});
    }
  }
  return out;
}

ChildTerm sample_child(const GrowthEdge& edge, int depth_from_root, const DPTables& tables,
                       std::mt19937_64& rng) {
  const std::vector<ChildTerm> terms = child_conditional(edge, depth_from_root, tables);
  double max_log = kNegInf;
  for (const ChildTerm& t : terms) max_log = std::max(max_log, t.log_weight);
  if (!std::isfinite(max_log))
    throw std::runtime_error("sample_child: zero conditional weight (inconsistent tables)");
  std::vector<double> weights(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    weights[i] = std::exp(terms[i].log_weight - max_log);
  const std::size_t pick = sample_discrete(weights, rng);
  if (pick >= terms.size()) throw std::runtime_error("sample_child: empty conditional");
  return terms[pick];
}

namespace {

Triangle child_triangle(int type, int variant, const GrowthEdge& edge, Point c) {
  if (type == 1 && variant == 1) return Triangle{type, c, edge.a, edge.b};
  return Triangle{type, edge.b, c, edge.a};
}

}  // namespace

TriangulatedPolygon sample_shape_from_posterior(const DPTables& tables,
                                                const RootMarginal& marginal,
                                                std::mt19937_64& rng, double* log_weight) {
  const Triangle root = marginal.sample(rng);
  double production_sum = marginal.log_production(root);

  TriangulatedPolygon shape;
  shape.nodes.push_back({root, -1, 0, {}});

  struct Pending {
    GrowthEdge edge;
    int depth;
    int parent;
  };
  std::deque<Pending> queue;
  for (const GrowthEdge& e : growth_edges(root, /*is_root=*/true))
    queue.push_back({e, 1, 0});

  while (!queue.empty()) {
    const Pending item = queue.front();
    queue.pop_front();
    const ChildTerm draw = sample_child(item.edge, item.depth, tables, rng);
    production_sum += draw.log_production;
    const Triangle tri = child_triangle(draw.type, draw.variant, item.edge, draw.vertex);
    const int idx = shape.size();
    shape.nodes.push_back({tri, item.parent, draw.variant, {}});
    shape.nodes[item.parent].children.push_back(idx);
    for (const GrowthEdge& e : growth_edges(tri, /*is_root=*/false, draw.variant))
      queue.push_back({e, item.depth + 1, idx});
  }
  if (log_weight) *log_weight = production_sum - marginal.total_log_mass();
  return shape;
}

std::vector<TriangulatedPolygon> sample_posterior(int n_samples, const Grid& grid,
                                                  const GrammarParams& params,
                                                  const GrayImage& image,
                                                  const LikelihoodConfig& cfg, int depth,
                                                  int max_edge_len, std::uint64_t seed,
                                                  std::vector<double>* log_weights) {
  if (n_samples < 0) throw std::invalid_argument("sample_posterior: negative sample count");
  const GradientField grad = smooth_gradient(image, cfg);
  auto index = std::make_shared<const EdgeIndex>(grid, max_edge_len);
  const GridToImageMap map = GridToImageMap::for_image(grid, image.width, image.height);
  const EdgeScoreTable table = precompute_edge_table(index, map, grad, cfg);
  const DPTables tables = compute_backward_weights(params, table, cfg, depth);
  const RootMarginal marginal = root_marginal(tables);

  std::vector<TriangulatedPolygon> shapes(n_samples);
  if (log_weights) log_weights->assign(n_samples, 0.0);
  detail::parallel_chunks(n_samples, 64, [&](long long, long long begin, long long end) {
    for (long long i = begin; i < end; ++i) {
      std::mt19937_64 rng = make_engine(seed, static_cast<std::uint64_t>(i));
      double lw = 0.0;
      shapes[i] = sample_shape_from_posterior(tables, marginal, rng, &lw);
      if (log_weights) (*log_weights)[i] = lw;
    }
  });
  return shapes;
}

namespace {

constexpr char kDPMagic[4] = {'S', 'G', 'D', 'P'};
constexpr std::uint32_t kDPVersion = 1;

template <class T>
void write_le(std::ofstream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
bool read_le(std::ifstream& in, T& value) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) return false;
  std::memcpy(&value, bytes, sizeof(T));
  return true;
}

}  // namespace

void save_dp_tables(const DPTables& tables, const std::string& path, std::uint64_t image_hash,
                    std::uint64_t config_hash) {
  const Impl& impl = *tables.impl;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dp cache: " + path);
  out.write(kDPMagic, 4);
  write_le<std::uint32_t>(out, kDPVersion);
  write_le<std::uint64_t>(out, image_hash);
  write_le<std::uint64_t>(out, config_hash);
  write_le<std::int32_t>(out, impl.index().grid().width);
  write_le<std::int32_t>(out, impl.index().grid().height);
  write_le<std::int32_t>(out, impl.index().max_edge_len());
  write_le<std::int32_t>(out, impl.depth);
  write_le<std::uint64_t>(out, static_cast<std::uint64_t>(impl.index().slot_count()));
  for (const auto& level : impl.levels)
    for (double v : level) write_le<double>(out, v);
}

std::optional<DPTables> load_dp_tables(const std::string& path, const GrammarParams& params,
                                       const EdgeScoreTable& table, const LikelihoodConfig& cfg,
                                       int depth, std::uint64_t image_hash,
                                       std::uint64_t config_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kDPMagic, 4) != 0) return std::nullopt;
  std::uint32_t version;
  std::uint64_t file_image, file_config, slots;
  std::int32_t w, h, lmax, file_depth;
  if (!read_le(in, version) || version != kDPVersion) return std::nullopt;
  if (!read_le(in, file_image) || file_image != image_hash) return std::nullopt;
  if (!read_le(in, file_config) || file_config != config_hash) return std::nullopt;
  if (!read_le(in, w) || !read_le(in, h) || !read_le(in, lmax) || !read_le(in, file_depth))
    return std::nullopt;
  const EdgeIndex& idx = table.index();
  if (w != idx.grid().width || h != idx.grid().height || lmax != idx.max_edge_len() ||
      file_depth != depth)
    return std::nullopt;
  if (!read_le(in, slots) || slots != static_cast<std::uint64_t>(idx.slot_count()))
    return std::nullopt;

  auto impl = build_impl(params, table, cfg, depth, /*compute_levels=*/false);
  impl->levels.assign(depth + 1, std::vector<double>(slots));
  for (auto& level : impl->levels)
    for (double& v : level)
      if (!read_le(in, v)) return std::nullopt;
  return DPTables{std::move(impl)};
}

}  // namespace shapegram
