#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gaborpd {

/// Single-channel real raster, row-major. All pixel values are expected finite.
class ImageGray {
public:
  ImageGray() = default;
  ImageGray(int width, int height, double fill = 0.0);
  ImageGray(int width, int height, std::vector<double> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  double& at(int x, int y) noexcept { return pixels_[index(x, y)]; }
  double at(int x, int y) const noexcept { return pixels_[index(x, y)]; }
  double& operator[](std::size_t i) noexcept { return pixels_[i]; }
  double operator[](std::size_t i) const noexcept { return pixels_[i]; }

  std::span<double> row(int y) noexcept {
    return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const double> row(int y) const noexcept {
    return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<double> pixels() noexcept { return pixels_; }
  std::span<const double> pixels() const noexcept { return pixels_; }

  bool all_finite() const noexcept;
  bool same_shape(const ImageGray& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImageGray&, const ImageGray&) = default;

private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// Complex response stored as two real planes.
struct ComplexImage {
  ImageGray re;
  ImageGray im;
};

/// Boolean raster (edge masks).
class Mask {
public:
  Mask() = default;
  Mask(int width, int height) : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool at(int x, int y) const noexcept { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v) noexcept { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
  std::size_t count() const noexcept;
  bool any() const noexcept { return count() > 0; }

  friend bool operator==(const Mask&, const Mask&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

ImageGray transpose(const ImageGray& img);
/// Counter-clockwise quarter turn: out(y, W-1-x) = in(x, y).
ImageGray rotate90(const ImageGray& img);
double max_abs(const ImageGray& img) noexcept;
double max_value(const ImageGray& img) noexcept;

}  // namespace gaborpd
