#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shapegram/geometry.hpp"

// Image ingestion and the gradient line integrals behind the boundary
// likelihood. An edge's contribution is the integral along the segment
// of the gradient component perpendicular to the edge, so the (scaled)
// log-likelihood of a shape decomposes into one term per boundary edge.

namespace shapegram {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // row-major intensities in [0,1]

  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

  static GrayImage constant(int width, int height, double value);
};

// Decodes binary PGM (P5, 8-bit) or PNG. PNG color is converted with
// luma weights 0.299/0.587/0.114; intensities are normalized by 255.
// Throws std::runtime_error on unsupported or truncated input, naming
// the offending byte offset where it is known.
GrayImage load_image(const std::string& path);
GrayImage decode_pgm(const std::vector<unsigned char>& bytes);
GrayImage decode_png(const std::vector<unsigned char>& bytes);

std::vector<unsigned char> encode_pgm(const GrayImage& img);
std::vector<unsigned char> encode_png(const GrayImage& img);
void save_pgm(const GrayImage& img, const std::string& path);

struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<double> gx, gy;

  double gx_at(int x, int y) const { return gx[static_cast<std::size_t>(y) * width + x]; }
  double gy_at(int x, int y) const { return gy[static_cast<std::size_t>(y) * width + x]; }
};

struct LikelihoodConfig {
  double lambda = 15.0;        // boundary-evidence gain
  double smooth_sigma = 1.0;   // Gaussian pre-smoothing in pixels
  double sample_spacing = 1.0; // quadrature step along edges in pixels
};

// Gaussian smoothing (kernel truncated at 3 sigma, reflected borders)
// followed by central differences, one-sided at the image borders.
GradientField smooth_gradient(const GrayImage& img, const LikelihoodConfig& cfg);

// Integral along the segment a->b (pixel coordinates) of
// |gx*t_y - gy*t_x| for the unit tangent t, by the midpoint rule at
// cfg.sample_spacing with bilinear gradient interpolation. The gradient
// is zero outside the image. Nonnegative; the edge's contribution to the
// likelihood exponent before scaling by lambda.
double edge_integral(Point a, Point b, const GradientField& grad, const LikelihoodConfig& cfg);

// FNV-1a content hashes used to key caches and record provenance.
std::uint64_t fnv1a64(const unsigned char* data, std::size_t size);
std::uint64_t image_content_hash(const GrayImage& img);

}  // namespace shapegram
