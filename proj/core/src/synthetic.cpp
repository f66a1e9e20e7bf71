#include "shapegram/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace shapegram {

double BlobSpec::boundary_radius(double theta) const {
  double r = 1.0;
  for (std::size_t k = 0; k < harmonic_amp.size(); ++k) {
    const double phase = k < harmonic_phase.size() ? harmonic_phase[k] : 0.0;
    r += harmonic_amp[k] * std::cos((static_cast<double>(k) + 2.0) * theta + phase);
  }
  return radius * r;
}

std::vector<Point> BlobSpec::boundary_polyline(int segments) const {
  std::vector<Point> pts(segments);
  for (int i = 0; i < segments; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / segments;
    const double r = boundary_radius(theta);
    pts[i] = {cx + r * std::cos(theta), cy + r * std::sin(theta)};
  }
  return pts;
}

GrayImage render_blobs(int width, int height, const std::vector<BlobSpec>& blobs, double inside,
                       double outside, int supersample) {
  if (width < 2 || height < 2) throw std::invalid_argument("render_blobs: image too small");
  if (supersample < 1) supersample = 1;
  GrayImage img = GrayImage::constant(width, height, outside);
  const double step = 1.0 / supersample;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int covered = 0;
      for (int sy = 0; sy < supersample; ++sy) {
        for (int sx = 0; sx < supersample; ++sx) {
          // Pixel (x,y) covers [x-0.5, x+0.5) x [y-0.5, y+0.5).
          const double px = x - 0.5 + (sx + 0.5) * step;
          const double py = y - 0.5 + (sy + 0.5) * step;
          for (const BlobSpec& blob : blobs) {
            const double dx = px - blob.cx, dy = py - blob.cy;
            const double theta = std::atan2(dy, dx);
            if (dx * dx + dy * dy <= std::pow(blob.boundary_radius(theta), 2)) {
              ++covered;
              break;
            }
          }
        }
      }
      const double coverage = static_cast<double>(covered) / (supersample * supersample);
      img.at(x, y) = outside + coverage * (inside - outside);
    }
  }
  return img;
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

}  // namespace

double blob_boundary_distance(const BlobSpec& blob, Point p) {
  const std::vector<Point> poly = blob.boundary_polyline();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % poly.size()];
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return best;
}

double blobs_boundary_distance(const std::vector<BlobSpec>& blobs, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const BlobSpec& blob : blobs) best = std::min(best, blob_boundary_distance(blob, p));
  return best;
}

}  // namespace shapegram
