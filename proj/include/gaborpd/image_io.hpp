#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaborpd/image.hpp"

namespace gaborpd {

/// Interleaved 8-bit RGB raster for visualizations.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

/// Binary (P5) or ASCII (P2) PGM, 8 or 16 bit. Values are scaled to [0, 1] by maxval.
ImageGray read_pgm(std::istream& is);
/// 8-bit binary PGM; values are mapped from [lo, hi] and clamped.
void write_pgm(std::ostream& os, const ImageGray& img, double lo = 0.0, double hi = 1.0);

/// Grey or colour PNG; colour is reduced with luma weights 0.299/0.587/0.114.
ImageGray read_png(const std::string& path);
void write_png(const std::string& path, const ImageGray& img, double lo = 0.0, double hi = 1.0);
void write_png(const std::string& path, const RgbImage& img);

/// Chooses the decoder from the file signature.
ImageGray read_image(const std::string& path);
/// PNG when the extension is .png, PGM otherwise.
void write_image(const std::string& path, const ImageGray& img, double lo = 0.0, double hi = 1.0);

/// Greyscale view of an image for drawing overlays on.
RgbImage to_rgb(const ImageGray& img, double lo = 0.0, double hi = 1.0);

}  // namespace gaborpd
