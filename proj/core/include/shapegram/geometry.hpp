#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

// Triangle / triangulated-polygon data model.
//
// A shape is a rooted tree of typed triangles. Types 0, 1 and 2 are the
// end, branch and junction triangles of the dual tree (degrees 1, 2, 3).
// The vertex labeling convention is fixed globally:
//
//   type 0: boundary edges (x0,x1), (x1,x2); diagonal (x2,x0)
//   type 1: boundary edge  (x0,x1);          diagonals (x1,x2), (x2,x0)
//   type 2: no boundary edges; all three edges are diagonals
//
// A triangle grown on a directed edge (a,b) with new vertex c is labeled
// (x0,x1,x2) = (b,c,a) for types 0 and 2 and for the first type-1 rule,
// and (c,a,b) for the second type-1 rule. New vertices always lie
// strictly on the left of the directed growth edge, so growth proceeds
// away from the parent and boundary edges chain head-to-tail into a
// counterclockwise cycle.

namespace shapegram {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
  friend Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point p, Point q) { return p.x == q.x && p.y == q.y; }
};

inline double cross(Point u, Point v) { return u.x * v.y - u.y * v.x; }
inline double dot(Point u, Point v) { return u.x * v.x + u.y * v.y; }
inline double norm(Point u) { return std::hypot(u.x, u.y); }

// Directed edge that still has to grow a triangle; oriented from a to b.
struct GrowthEdge {
  Point a;
  Point b;
  friend bool operator==(const GrowthEdge& e, const GrowthEdge& f) {
    return e.a == f.a && e.b == f.b;
  }
};

struct Triangle {
  int type = 0;  // 0, 1 or 2
  Point x0, x1, x2;

  double signed_area() const { return 0.5 * cross(x1 - x0, x2 - x0); }
  bool degenerate() const { return signed_area() == 0.0; }
  std::array<Point, 3> vertices() const { return {x0, x1, x2}; }
};

// True iff c lies strictly on the left of the directed line a -> b.
inline bool is_valid_placement(Point a, Point b, Point c) {
  return cross(b - a, c - a) > 0.0;
}

// Log-anisotropy of the affine map taking the labeled triangle `ref` to
// `target`: log(s1/s2) for the singular values s1 >= s2 of the linear
// part. Zero iff the triangles are similar (reflections included).
// Throws std::invalid_argument if `ref` is degenerate; returns +inf if
// `target` is degenerate.
double log_anisotropy(const std::array<Point, 3>& ref, const std::array<Point, 3>& target);

// Boundary (solid) edges of a triangle under the labeling convention:
// 2, 1 and 0 edges for types 0, 1 and 2.
std::vector<std::pair<Point, Point>> boundary_edges(const Triangle& t);

// Directed growth edges of a triangle, in the order children are grown.
// `variant` selects the type-1 glue side for non-root triangles
// (0: triangle (b,c,a) continuing on (a,c); 1: triangle (c,a,b)
// continuing on (c,b)); it is ignored for other types and for the root.
std::vector<GrowthEdge> growth_edges(const Triangle& t, bool is_root, int variant = 0);

// One triangle of a shape. `children[k]` completes growth_edges(...)[k].
struct ShapeNode {
  Triangle tri;
  int parent = -1;  // -1 for the root
  int variant = 0;  // type-1 glue side, derived from the parent edge
  std::vector<int> children;
};

// Rooted tree of triangles; nodes[0] is the root. Instances produced by
// the samplers are immutable and valid by construction; hand-built or
// deserialized trees should be passed through validate().
struct TriangulatedPolygon {
  std::vector<ShapeNode> nodes;

  int size() const { return static_cast<int>(nodes.size()); }
  int count_of_type(int type) const;

  // All boundary edges, one pair per solid edge, in tree order.
  std::vector<std::pair<Point, Point>> solid_edges() const;
};

// Checks the tree structure: child counts match types (the root has
// type+1 children, every other node type children), every child triangle
// sits on its parent growth edge with the new vertex strictly to the
// left, non-root leaves have type 0, and no triangle is degenerate.
// Returns an empty string when valid, else a description of the defect.
std::string validate_shape(const TriangulatedPolygon& shape);

// The closed boundary cycle: vertices v0..v_{m-1} with boundary edges
// (v_i, v_{i+1 mod m}); m equals triangle count + 2. Throws
// std::runtime_error on malformed trees (including single triangles).
std::vector<Point> polygon_boundary(const TriangulatedPolygon& shape);

}  // namespace shapegram
