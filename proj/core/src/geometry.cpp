#include "shapegram/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace shapegram {

double log_anisotropy(const std::array<Point, 3>& ref, const std::array<Point, 3>& target) {
  // Linear part L of the affine map: L * (ref edge vectors) = target edge
  // vectors, so L = V * U^{-1} with U, V the 2x2 edge-vector matrices.
  const Point u1 = ref[1] - ref[0], u2 = ref[2] - ref[0];
  const Point v1 = target[1] - target[0], v2 = target[2] - target[0];
  const double det_u = cross(u1, u2);
  if (det_u == 0.0) throw std::invalid_argument("log_anisotropy: degenerate reference triangle");

  const double inv = 1.0 / det_u;
  // U^{-1} = adj(U)/det(U) with U = [u1 | u2] as columns.
  const double i00 = u2.y * inv, i01 = -u2.x * inv;
  const double i10 = -u1.y * inv, i11 = u1.x * inv;
  const double m00 = v1.x * i00 + v2.x * i10;
  const double m01 = v1.x * i01 + v2.x * i11;
  const double m10 = v1.y * i00 + v2.y * i10;
  const double m11 = v1.y * i01 + v2.y * i11;

  // Closed-form singular values of a 2x2 matrix: s1 = Q+R, s2 = |Q-R|.
  const double e = 0.5 * (m00 + m11), f = 0.5 * (m00 - m11);
  const double g = 0.5 * (m10 + m01), h = 0.5 * (m10 - m01);
  const double q = std::hypot(e, h), r = std::hypot(f, g);
  const double s1 = q + r, s2 = std::abs(q - r);
  if (s2 == 0.0) {
    return s1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::log(s1 / s2);
}

std::vector<std::pair<Point, Point>> boundary_edges(const Triangle& t) {
  switch (t.type) {
    case 0: return {{t.x0, t.x1}, {t.x1, t.x2}};
    case 1: return {{t.x0, t.x1}};
    default: return {};
  }
}

std::vector<GrowthEdge> growth_edges(const Triangle& t, bool is_root, int variant) {
  if (is_root) {
    switch (t.type) {
      case 0: return {{t.x0, t.x2}};
      case 1: return {{t.x0, t.x2}, {t.x2, t.x1}};
      default: return {{t.x0, t.x2}, {t.x2, t.x1}, {t.x1, t.x0}};
    }
  }
  switch (t.type) {
    case 0: return {};
    case 1:
      return variant == 0 ? std::vector<GrowthEdge>{{t.x2, t.x1}}
                          : std::vector<GrowthEdge>{{t.x0, t.x2}};
    default: return {{t.x2, t.x1}, {t.x1, t.x0}};
  }
}

int TriangulatedPolygon::count_of_type(int type) const {
  int n = 0;
  for (const auto& node : nodes) n += node.tri.type == type ? 1 : 0;
  return n;
}

std::vector<std::pair<Point, Point>> TriangulatedPolygon::solid_edges() const {
  std::vector<std::pair<Point, Point>> edges;
  for (const auto& node : nodes) {
    auto e = boundary_edges(node.tri);
    edges.insert(edges.end(), e.begin(), e.end());
  }
  return edges;
}

namespace {

// Matches a child triangle against its parent growth edge (a,b) and
// returns the glue variant, or -1 if the triangle does not sit on the
// edge under the labeling convention.
int match_child(const Triangle& t, const GrowthEdge& edge) {
  const Point a = edge.a, b = edge.b;
  if (t.type == 1) {
    if (t.x2 == a && t.x0 == b) return 0;  // (b,c,a)
    if (t.x1 == a && t.x2 == b) return 1;  // (c,a,b)
    return -1;
  }
  return (t.x2 == a && t.x0 == b) ? 0 : -1;
}

Point free_vertex(const Triangle& t, int variant) {
  return (t.type == 1 && variant == 1) ? t.x0 : t.x1;
}

}  // namespace

std::string validate_shape(const TriangulatedPolygon& shape) {
  const int n = shape.size();
  if (n < 2) return "shape must contain at least two triangles";
  std::vector<int> referenced(n, 0);
  for (int i = 0; i < n; ++i)
    for (int c : shape.nodes[i].children)
      if (c >= 0 && c < n) ++referenced[c];
  for (int i = 1; i < n; ++i)
    if (referenced[i] != 1) return "tree is not connected";
  for (int i = 0; i < n; ++i) {
    const ShapeNode& node = shape.nodes[i];
    if (node.tri.type < 0 || node.tri.type > 2) return "triangle type out of range";
    if (node.tri.degenerate()) return "degenerate triangle in shape";
    if ((i == 0) != (node.parent < 0)) return "exactly the root may lack a parent";
    const int expected = node.tri.type + (i == 0 ? 1 : 0);
    if (static_cast<int>(node.children.size()) != expected)
      return "child count does not match triangle type";
    const auto edges = growth_edges(node.tri, i == 0, node.variant);
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      const int c = node.children[k];
      if (c <= i || c >= n) return "child index out of order";
      const ShapeNode& child = shape.nodes[c];
      if (child.parent != i) return "child parent index mismatch";
      const int variant = match_child(child.tri, edges[k]);
      if (variant < 0 || variant != child.variant)
        return "child triangle does not sit on its parent growth edge";
      if (!is_valid_placement(edges[k].a, edges[k].b, free_vertex(child.tri, variant)))
        return "child vertex is not on the left of its growth edge";
    }
  }
  return {};
}

namespace {

// Boundary of the subtree grown from a directed edge (p,q): a vertex
// path starting at q whose final edge arrives back at p (the terminal p
// is supplied by the caller's context).
void emit_path(const TriangulatedPolygon& shape, int idx, std::vector<Point>& out) {
  const ShapeNode& node = shape.nodes[idx];
  const Triangle& t = node.tri;
  switch (t.type) {
    case 0:
      out.push_back(t.x0);  // q
      out.push_back(t.x1);  // c
      return;
    case 1:
      if (node.variant == 0) {
        out.push_back(t.x0);  // q, then boundary edge (q,c)
        emit_path(shape, node.children[0], out);
      } else {
        emit_path(shape, node.children[0], out);
        out.push_back(t.x0);  // c, boundary edge (c,p) closes via context
      }
      return;
    default:
      emit_path(shape, node.children[1], out);  // q .. c
      emit_path(shape, node.children[0], out);  // c .. p
      return;
  }
}

}  // namespace

std::vector<Point> polygon_boundary(const TriangulatedPolygon& shape) {
  const std::string err = validate_shape(shape);
  if (!err.empty()) throw std::runtime_error("polygon_boundary: " + err);

  const ShapeNode& root = shape.nodes[0];
  const Triangle& t = root.tri;
  std::vector<Point> cycle;
  switch (t.type) {
    case 0:
      cycle.push_back(t.x0);
      cycle.push_back(t.x1);
      emit_path(shape, root.children[0], cycle);
      break;
    case 1:
      cycle.push_back(t.x0);
      emit_path(shape, root.children[1], cycle);
      emit_path(shape, root.children[0], cycle);
      break;
    default:
      emit_path(shape, root.children[2], cycle);
      emit_path(shape, root.children[1], cycle);
      emit_path(shape, root.children[0], cycle);
      break;
  }

  if (static_cast<int>(cycle.size()) != shape.size() + 2)
    throw std::runtime_error("polygon_boundary: boundary does not close into a single cycle");
  return cycle;
}

}  // namespace shapegram
