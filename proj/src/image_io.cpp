#include "gaborpd/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

std::uint8_t to_byte(double v, double lo, double hi) {
  const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
  if (!(t > 0.0)) return 0;
  if (t >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(t * 255.0));
}

// Next header token, skipping whitespace and '#' comments.
long pgm_token(std::istream& is) {
  int c = is.get();
  for (;;) {
    while (c != EOF && std::isspace(c)) c = is.get();
    if (c == '#') {
      while (c != EOF && c != '\n') c = is.get();
      continue;
    }
    break;
  }
  if (c == EOF || !std::isdigit(c)) throw FormatError("malformed PGM header");
  long v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    if (v > (1L << 30)) throw FormatError("PGM header value too large");
    c = is.get();
  }
  // Exactly one whitespace byte separates the header from binary data.
  if (c != EOF && !std::isspace(c)) throw FormatError("malformed PGM header");
  return v;
}

}  // namespace

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  data[i] = r;
  data[i + 1] = g;
  data[i + 2] = b;
}

ImageGray read_pgm(std::istream& is) {
  char magic[2] = {0, 0};
  if (!is.read(magic, 2) || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2')) {
    throw FormatError("not a PGM file");
  }
  const bool binary = magic[1] == '5';
  const long w = pgm_token(is);
  const long h = pgm_token(is);
  const long maxval = pgm_token(is);
  if (w <= 0 || h <= 0) throw FormatError("PGM dimensions must be positive");
  if (maxval <= 0 || maxval > 65535) throw FormatError("PGM maxval out of range");
  std::vector<double> px(static_cast<std::size_t>(w) * h);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    const bool wide = maxval > 255;
    std::vector<unsigned char> buf(px.size() * (wide ? 2 : 1));
    if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
      throw FormatError("truncated PGM data");
    }
    for (std::size_t i = 0; i < px.size(); ++i) {
      const unsigned v = wide ? (unsigned{buf[2 * i]} << 8) | buf[2 * i + 1] : buf[i];
      px[i] = std::min<double>(v, maxval) * scale;
    }
  } else {
    for (double& v : px) {
      long s = 0;
      if (!(is >> s) || s < 0) throw FormatError("truncated PGM data");
      v = static_cast<double>(std::min(s, maxval)) * scale;
    }
  }
  return ImageGray(static_cast<int>(w), static_cast<int>(h), std::move(px));
}

void write_pgm(std::ostream& os, const ImageGray& img, double lo, double hi) {
  if (img.empty()) throw SizeError("cannot write an empty image");
  os << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<char> buf(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) buf[i] = static_cast<char>(to_byte(img[i], lo, hi));
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

ImageGray read_png(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw FormatError("cannot read PNG '" + path + "': " + image.message);
  }
  const bool colour = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError("cannot decode PNG '" + path + "': " + image.message);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<double> px(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = colour ? (0.299 * buf[3 * i] + 0.587 * buf[3 * i + 1] + 0.114 * buf[3 * i + 2]) / 255.0 : buf[i] / 255.0;
  }
  return ImageGray(w, h, std::move(px));
}

void write_png(const std::string& path, const ImageGray& img, double lo, double hi) {
  if (img.empty()) throw SizeError("cannot write an empty image");
  std::vector<png_byte> buf(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) buf[i] = to_byte(img[i], lo, hi);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buf.data(), 0, nullptr)) {
    throw FormatError("cannot write PNG '" + path + "': " + image.message);
  }
}

void write_png(const std::string& path, const RgbImage& img) {
  if (img.width <= 0 || img.height <= 0) throw SizeError("cannot write an empty image");
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.data.data(), 0, nullptr)) {
    throw FormatError("cannot write PNG '" + path + "': " + image.message);
  }
}

ImageGray read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  if (in.gcount() >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '2')) {
    in.clear();
    in.seekg(0);
    return read_pgm(in);
  }
  if (in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0) return read_png(path);
  throw FormatError("unrecognized image format: '" + path + "'");
}

void write_image(const std::string& path, const ImageGray& img, double lo, double hi) {
  const bool png = path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0;
  if (png) {
    write_png(path, img, lo, hi);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_pgm(out, img, lo, hi);
}

RgbImage to_rgb(const ImageGray& img, double lo, double hi) {
  RgbImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const std::uint8_t v = to_byte(img[i], lo, hi);
    out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = v;
  }
  return out;
}

}  // namespace gaborpd
