#pragma once

// Independent helpers shared by the test suites: seeded random inputs and
// direct-summation oracles that do not go through the library's engines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gaborpd/image.hpp"
#include "gaborpd/separable_conv.hpp"

namespace gaborpd::testing {

class Rand {
public:
  explicit Rand(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
};

inline ImageGray random_image(Rand& r, int w, int h, double lo = -1.0, double hi = 1.0) {
  ImageGray img(w, h);
  for (double& v : img.pixels()) v = r.uniform(lo, hi);
  return img;
}

inline std::vector<double> random_taps(Rand& r, int n) {
  std::vector<double> t(n);
  for (double& v : t) v = r.uniform(-1.0, 1.0);
  return t;
}

/// Full 2D convolution with the outer-product kernel, evaluated only where the
/// support stays inside the image. Pixels outside that interior are left at 0.
inline ImageGray brute_force_2d(const ImageGray& img, const std::vector<double>& kr, int cr,
                                const std::vector<double>& kc, int cc) {
  ImageGray out(img.width(), img.height());
  const int nr = static_cast<int>(kr.size());
  const int nc = static_cast<int>(kc.size());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (x + cr - (nr - 1) < 0 || x + cr >= img.width() || y + cc - (nc - 1) < 0 || y + cc >= img.height()) continue;
      double s = 0.0;
      for (int j = 0; j < nc; ++j) {
        for (int i = 0; i < nr; ++i) s += kc[j] * kr[i] * img.at(x + cr - i, y + cc - j);
      }
      out.at(x, y) = s;
    }
  }
  return out;
}

/// sqrt(sum (a-b)^2 / sum b^2) over pixels at least `margin` from every side.
inline double relative_l2(const ImageGray& a, const ImageGray& b, int margin) {
  double num = 0.0, den = 0.0;
  for (int y = margin; y < a.height() - margin; ++y) {
    for (int x = margin; x < a.width() - margin; ++x) {
      const double d = a.at(x, y) - b.at(x, y);
      num += d * d;
      den += b.at(x, y) * b.at(x, y);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// Direct Gaussian smoothing by 2D summation with reflected borders.
inline ImageGray direct_gaussian(const ImageGray& img, double sigma) {
  const int r = static_cast<int>(std::ceil(5.0 * sigma));
  std::vector<double> g(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) sum += g[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& v : g) v /= sum;
  ImageGray tmp(img.width(), img.height()), out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += g[i + r] * img.at(border_index(x + i, img.width(), Border::Reflect), y);
      tmp.at(x, y) = s;
    }
  }
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += g[i + r] * tmp.at(x, border_index(y + i, img.height(), Border::Reflect));
      out.at(x, y) = s;
    }
  }
  return out;
}

/// (I(x+1) - I(x-1)) / 2 along rows; zero on the outer columns.
inline ImageGray central_dx(const ImageGray& img) {
  ImageGray out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 1; x + 1 < img.width(); ++x) out.at(x, y) = 0.5 * (img.at(x + 1, y) - img.at(x - 1, y));
  }
  return out;
}

inline double max_abs_diff(const ImageGray& a, const ImageGray& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace gaborpd::testing
