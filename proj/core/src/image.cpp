#include "shapegram/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace shapegram {

GrayImage GrayImage::constant(int width, int height, double value) {
  GrayImage img;
  img.width = width;
  img.height = height;
  img.data.assign(static_cast<std::size_t>(width) * height, value);
  return img;
}

namespace {

[[noreturn]] void fail_at(const std::string& what, std::size_t offset) {
  throw std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")");
}

// Reads one PGM header token, skipping whitespace and '#' comments.
std::string pgm_token(const std::vector<unsigned char>& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    const unsigned char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(c)) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size()) fail_at("pgm: truncated header", pos);
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#')
    token.push_back(static_cast<char>(bytes[pos++]));
  return token;
}

long pgm_int(const std::vector<unsigned char>& bytes, std::size_t& pos, const char* name) {
  const std::size_t at = pos;
  const std::string token = pgm_token(bytes, pos);
  try {
    std::size_t used = 0;
    const long value = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    fail_at(std::string("pgm: malformed ") + name, at);
  }
}

}  // namespace

GrayImage decode_pgm(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    fail_at("pgm: not a binary (P5) PGM file", 0);
  std::size_t pos = 2;
  const long width = pgm_int(bytes, pos, "width");
  const long height = pgm_int(bytes, pos, "height");
  const long maxval = pgm_int(bytes, pos, "maxval");
  if (width < 2 || height < 2) fail_at("pgm: image must be at least 2x2", pos);
  if (maxval != 255) fail_at("pgm: only 8-bit images (maxval 255) are supported", pos);
  if (pos >= bytes.size() || !std::isspace(bytes[pos]))
    fail_at("pgm: missing raster separator", pos);
  ++pos;

  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos < pixels) fail_at("pgm: truncated raster", bytes.size());

  GrayImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.data.resize(pixels);
  for (std::size_t i = 0; i < pixels; ++i) img.data[i] = bytes[pos + i] / 255.0;
  return img;
}

std::vector<unsigned char> encode_pgm(const GrayImage& img) {
  std::string header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                       "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + img.data.size());
  for (double v : img.data) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    out.push_back(static_cast<unsigned char>(std::lround(clamped * 255.0)));
  }
  return out;
}

GrayImage decode_png(const std::vector<unsigned char>& bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
    throw std::runtime_error(std::string("png: ") + png.message);
  png.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> rgb(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, rgb.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw std::runtime_error("png: " + message);
  }
  if (png.width < 2 || png.height < 2) throw std::runtime_error("png: image must be at least 2x2");

  GrayImage img;
  img.width = static_cast<int>(png.width);
  img.height = static_cast<int>(png.height);
  img.data.resize(static_cast<std::size_t>(img.width) * img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const unsigned r = rgb[3 * i], g = rgb[3 * i + 1], b = rgb[3 * i + 2];
    // Integer luma keeps gray PNG pixels bit-identical to PGM pixels.
    img.data[i] = (299u * r + 587u * g + 114u * b) / 1000.0 / 255.0;
  }
  return img;
}

std::vector<unsigned char> encode_png(const GrayImage& img) {
  std::vector<unsigned char> gray(img.data.size());
  for (std::size_t i = 0; i < gray.size(); ++i)
    gray[i] = static_cast<unsigned char>(std::lround(std::clamp(img.data[i], 0.0, 1.0) * 255.0));

  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width);
  png.height = static_cast<png_uint_32>(img.height);
  png.format = PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, gray.data(), 0, nullptr))
    throw std::runtime_error(std::string("png encode: ") + png.message);
  std::vector<unsigned char> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, gray.data(), 0, nullptr))
    throw std::runtime_error(std::string("png encode: ") + png.message);
  out.resize(size);
  return out;
}

GrayImage load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.empty()) fail_at("image file is empty: " + path, 0);
  if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' &&
      bytes[3] == 'G')
    return decode_png(bytes);
  if (bytes[0] == 'P' && bytes.size() >= 2 && bytes[1] == '5') return decode_pgm(bytes);
  fail_at("unsupported image format (expected P5 PGM or PNG): " + path, 0);
}

void save_pgm(const GrayImage& img, const std::string& path) {
  const std::vector<unsigned char> bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

namespace {

inline int reflect(int i, int n) {
  if (i < 0) i = -i - 1;
  if (i >= n) i = 2 * n - 1 - i;
  return std::clamp(i, 0, n - 1);
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    total += kernel[i + radius];
  }
  for (double& k : kernel) k /= total;
  return kernel;
}

GrayImage smoothed(const GrayImage& img, double sigma) {
  if (sigma <= 0.0) return img;
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  GrayImage tmp = img, out = img;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += kernel[t + radius] * img.at(reflect(x + t, img.width), y);
      tmp.at(x, y) = acc;
    }
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += kernel[t + radius] * tmp.at(x, reflect(y + t, img.height));
      out.at(x, y) = acc;
    }
  return out;
}

}  // namespace

GradientField smooth_gradient(const GrayImage& img, const LikelihoodConfig& cfg) {
  if (img.width < 2 || img.height < 2)
    throw std::invalid_argument("smooth_gradient: image must be at least 2x2");
  const GrayImage s = smoothed(img, cfg.smooth_sigma);
  GradientField grad;
  grad.width = img.width;
  grad.height = img.height;
  grad.gx.resize(img.data.size());
  grad.gy.resize(img.data.size());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
      if (x == 0)
        grad.gx[i] = s.at(1, y) - s.at(0, y);
      else if (x == img.width - 1)
        grad.gx[i] = s.at(x, y) - s.at(x - 1, y);
      else
        grad.gx[i] = 0.5 * (s.at(x + 1, y) - s.at(x - 1, y));
      if (y == 0)
        grad.gy[i] = s.at(x, 1) - s.at(x, 0);
      else if (y == img.height - 1)
        grad.gy[i] = s.at(x, y) - s.at(x, y - 1);
      else
        grad.gy[i] = 0.5 * (s.at(x, y + 1) - s.at(x, y - 1));
    }
  }
  return grad;
}

namespace {

// Bilinear interpolation with zero gradient outside the image.
inline void interpolate(const GradientField& g, double px, double py, double& gx, double& gy) {
  gx = 0.0;
  gy = 0.0;
  const double fx = std::floor(px), fy = std::floor(py);
  const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
  const double ax = px - fx, ay = py - fy;
  const double w[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  for (int k = 0; k < 4; ++k) {
    if (w[k] == 0.0) continue;
    if (xs[k] < 0 || xs[k] >= g.width || ys[k] < 0 || ys[k] >= g.height) continue;
    gx += w[k] * g.gx_at(xs[k], ys[k]);
    gy += w[k] * g.gy_at(xs[k], ys[k]);
  }
}

}  // namespace

double edge_integral(Point a, Point b, const GradientField& grad, const LikelihoodConfig& cfg) {
  const double len = norm(b - a);
  if (len == 0.0) throw std::invalid_argument("edge_integral: degenerate edge");
  if (!(cfg.sample_spacing > 0.0))
    throw std::invalid_argument("edge_integral: sample spacing must be positive");
  const Point tangent = (1.0 / len) * (b - a);
  const int steps = std::max(1, static_cast<int>(std::ceil(len / cfg.sample_spacing)));
  const double h = len / steps;
  double total = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) * h;
    double gx, gy;
    interpolate(grad, a.x + t * tangent.x, a.y + t * tangent.y, gx, gy);
    total += std::abs(gx * tangent.y - gy * tangent.x);
  }
  total *= h;
  if (!std::isfinite(total)) throw std::runtime_error("edge_integral: non-finite gradient");
  return total;
}

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 0x100000001B3ull;
  }
  return hash;
}

std::uint64_t image_content_hash(const GrayImage& img) {
  std::uint64_t hash = fnv1a64(reinterpret_cast<const unsigned char*>(&img.width), sizeof(int));
  hash ^= fnv1a64(reinterpret_cast<const unsigned char*>(&img.height), sizeof(int));
  hash ^= fnv1a64(reinterpret_cast<const unsigned char*>(img.data.data()),
                  img.data.size() * sizeof(double));
  return hash;
}

}  // namespace shapegram
