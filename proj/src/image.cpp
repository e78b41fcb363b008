#include "gaborpd/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaborpd/errors.hpp"

namespace gaborpd {

ImageGray::ImageGray(int width, int height, double fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw SizeError("image dimensions must be positive");
  }
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

ImageGray::ImageGray(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) {
    throw SizeError("image dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw SizeError("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

bool ImageGray::all_finite() const noexcept {
  return std::all_of(pixels_.begin(), pixels_.end(), [](double v) { return std::isfinite(v); });
}

std::size_t Mask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

ImageGray transpose(const ImageGray& img) {
  ImageGray out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out.at(y, x) = img.at(x, y);
    }
  }
  return out;
}

ImageGray rotate90(const ImageGray& img) {
  const int w = img.width();
  const int h = img.height();
  ImageGray out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(y, w - 1 - x) = img.at(x, y);
    }
  }
  return out;
}

double max_abs(const ImageGray& img) noexcept {
  double m = 0.0;
  for (double v : img.pixels()) m = std::max(m, std::abs(v));
  return m;
}

double max_value(const ImageGray& img) noexcept {
  if (img.empty()) return 0.0;
  return *std::max_element(img.pixels().begin(), img.pixels().end());
}

}  // namespace gaborpd
