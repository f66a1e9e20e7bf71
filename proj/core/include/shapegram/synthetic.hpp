#pragma once

#include <vector>

#include "shapegram/image.hpp"

// Synthetic test images with analytically known boundaries: smooth
// star-shaped blobs rho(theta) = radius * (1 + sum_k amp[k] *
// cos((k+2) theta + phase[k])) rendered with supersampled coverage.

namespace shapegram {

struct BlobSpec {
  double cx = 0.0, cy = 0.0;
  double radius = 10.0;
  std::vector<double> harmonic_amp;    // harmonics 2, 3, ...
  std::vector<double> harmonic_phase;  // same length as harmonic_amp

  double boundary_radius(double theta) const;
  // Dense boundary polyline, for distance queries and overlays.
  std::vector<Point> boundary_polyline(int segments = 2048) const;
};

// inside/outside are the object and background intensities.
GrayImage render_blobs(int width, int height, const std::vector<BlobSpec>& blobs,
                       double inside = 0.85, double outside = 0.15, int supersample = 4);

// Distance from p (pixel coordinates) to the blob boundary curve.
double blob_boundary_distance(const BlobSpec& blob, Point p);

// Distance to the nearest boundary among several blobs.
double blobs_boundary_distance(const std::vector<BlobSpec>& blobs, Point p);

}  // namespace shapegram
