#include "gaborpd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

void check_size(int width, int height) {
  if (width <= 0 || height <= 0) throw SizeError("image dimensions must be positive");
}

/// Length of [x - 0.5, x + 0.5] n [a, b].
double coverage(double x, double a, double b) {
  return std::max(0.0, std::min(x + 0.5, b) - std::max(x - 0.5, a));
}

// Portable uniform draws: std distributions differ between standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 gen_;
};

struct Blob {
  double x, y, r, amp;
};

struct Segment {
  double x0, y0, x1, y1, half_width;
};

double segment_distance(const Segment& s, double x, double y) {
  const double dx = s.x1 - s.x0;
  const double dy = s.y1 - s.y0;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((x - s.x0) * dx + (y - s.y0) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(x - (s.x0 + t * dx), y - (s.y0 + t * dy));
}

}  // namespace

ImageGray gaussian_blur(const ImageGray& img, double sigma, Border border) {
  if (!(sigma > 0.0)) throw DomainError("blur sigma must be positive");
  const int r = static_cast<int>(std::ceil(4.0 * sigma));
  Taps g{std::vector<double>(2 * r + 1), r};
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) sum += g.taps[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& v : g.taps) v /= sum;
  return conv_separable(img, g.view(), g.view(), border);
}

ImageGray step_edge(int width, int height, double edge_x, double lo, double hi) {
  check_size(width, height);
  ImageGray img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) img.at(x, y) = lo + (hi - lo) * coverage(x, edge_x, 1e300);
  }
  return img;
}

ImageGray square(int width, int height, double x0, double y0, double side, double lo, double hi) {
  check_size(width, height);
  if (!(side > 0.0)) throw DomainError("square side must be positive");
  ImageGray img(width, height);
  for (int y = 0; y < height; ++y) {
    const double cy = coverage(y, y0, y0 + side);
    for (int x = 0; x < width; ++x) img.at(x, y) = lo + (hi - lo) * cy * coverage(x, x0, x0 + side);
  }
  return img;
}

ImageGray gaussian_blob(int width, int height, double cx, double cy, double r, double amplitude, double bg) {
  check_size(width, height);
  if (!(r > 0.0)) throw DomainError("blob radius must be positive");
  ImageGray img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      img.at(x, y) = bg + amplitude * std::exp(-d2 / (r * r));
    }
  }
  return img;
}

ImageGray grating(int width, int height, double theta, double omega, double phase) {
  check_size(width, height);
  ImageGray img(width, height);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) img.at(x, y) = 0.5 + 0.5 * std::cos(omega * (x * c + y * s) + phase);
  }
  return img;
}

ImageGray checkerboard(int width, int height, int cell, double lo, double hi) {
  check_size(width, height);
  if (cell <= 0) throw DomainError("checkerboard cell must be positive");
  ImageGray img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) img.at(x, y) = ((x / cell + y / cell) % 2 == 0) ? lo : hi;
  }
  return img;
}

ImageGray random_smooth(int width, int height, double sigma, std::uint64_t seed) {
  check_size(width, height);
  Rng rng(seed);
  ImageGray noise(width, height);
  for (double& v : noise.pixels()) v = rng.normal();
  ImageGray img = gaussian_blur(noise, sigma);
  const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
  const double a = *lo;
  const double span = *hi - *lo;
  for (double& v : img.pixels()) v = span > 0.0 ? (v - a) / span : 0.5;
  return img;
}

ImageGray structured_scene(int width, int height, std::uint64_t seed) {
  check_size(width, height);
  Rng rng(seed);

  // Checkerboard patch in the upper left.
  const double cb_x0 = 0.06 * width;
  const double cb_y0 = 0.08 * height;
  const int cells = 8;
  const double cell = std::round(0.035 * width);

  // Blobs on a jittered grid over the right half.
  std::vector<Blob> blobs;
  const double radii[] = {2.5, 3.5, 5.0, 7.0};
  for (double gy = 0.1 * height; gy < 0.62 * height; gy += 0.13 * height) {
    for (double gx = 0.45 * width; gx < 0.95 * width; gx += 0.1 * width) {
      const double r = radii[static_cast<int>(rng.uniform() * 4.0) % 4];
      const double amp = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.25, 0.4);
      blobs.push_back({gx + rng.uniform(-3.0, 3.0), gy + rng.uniform(-3.0, 3.0), r, amp});
    }
  }

  // Text-like strokes along the bottom: each glyph is three segments in a box.
  std::vector<Segment> strokes;
  const double gw = 0.045 * width;
  const double gh = 0.1 * height;
  for (double base_y = 0.7 * height; base_y + gh < 0.96 * height; base_y += 1.5 * gh) {
    for (double gx = 0.06 * width; gx + gw < 0.94 * width; gx += 1.6 * gw) {
      for (int s = 0; s < 3; ++s) {
        const double x0 = gx + rng.uniform() * gw;
        const double y0 = base_y + rng.uniform() * gh;
        const double x1 = gx + rng.uniform() * gw;
        const double y1 = base_y + rng.uniform() * gh;
        strokes.push_back({x0, y0, x1, y1, rng.uniform(0.8, 1.4)});
      }
    }
  }

  constexpr int kSub = 4;
  ImageGray img(width, height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int sy = 0; sy < kSub; ++sy) {
        for (int sx = 0; sx < kSub; ++sx) {
          const double px = x - 0.5 + (sx + 0.5) / kSub;
          const double py = y - 0.5 + (sy + 0.5) / kSub;
          double v = 0.5;
          const double u = (px - cb_x0) / cell;
          const double w = (py - cb_y0) / cell;
          if (u >= 0.0 && w >= 0.0 && u < cells && w < cells) {
            v = ((static_cast<int>(u) + static_cast<int>(w)) % 2 == 0) ? 0.15 : 0.85;
          }
          for (const Blob& b : blobs) {
            const double d2 = (px - b.x) * (px - b.x) + (py - b.y) * (py - b.y);
            if (d2 < 25.0 * b.r * b.r) v += b.amp * std::exp(-d2 / (b.r * b.r));
          }
          for (const Segment& s : strokes) {
            if (segment_distance(s, px, py) <= s.half_width) {
              v = 0.1;
              break;
            }
          }
          acc += v;
        }
      }
      img.at(x, y) = acc / (kSub * kSub);
    }
  }
  return gaussian_blur(img, 0.8);
}

std::vector<ViewPair> viewpoint_sequence(int width, int height) {
  check_size(width, height);
  std::vector<ViewPair> seq;
  for (int deg = 20; deg <= 60; deg += 10) {
    const double rad = deg * std::numbers::pi / 180.0;
    seq.push_back({"view" + std::to_string(deg),
                   Homography::viewpoint(rad, static_cast<double>(width), 0.5 * (width - 1), 0.5 * (height - 1))});
  }
  return seq;
}

}  // namespace gaborpd
