#include "gaborpd/separable_conv.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "conv_checks.hpp"
#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

constexpr int kColumnBlock = 64;

void require_real(const Kernel1D& k) {
  if (k.is_complex()) throw DomainError("complex kernel passed to a real convolution; use the *_complex variant");
}

ImageGray combine(const ImageGray& a, double sa, const ImageGray& b, double sb) {
  ImageGray out(a.width(), a.height());
  const auto n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = sa * a[i] + sb * b[i];
  return out;
}

std::vector<std::complex<double>> complex_gabor_taps(double alpha, double xi, int radius) {
  std::vector<std::complex<double>> t(2 * radius + 1);
  const double amp = std::sqrt(alpha / std::numbers::pi);
  for (int j = -radius; j <= radius; ++j) {
    const double e = amp * std::exp(-alpha * j * j);
    t[j + radius] = {e * std::cos(xi * j), -e * std::sin(xi * j)};
  }
  return t;
}

Kernel1D to_kernel(const std::vector<std::complex<double>>& t, int radius) {
  Kernel1D k;
  k.center_index = radius;
  k.truncation_radius = radius;
  k.parity = Parity::Complex;
  for (const auto& v : t) {
    k.re.push_back(v.real());
    k.im.push_back(v.imag());
  }
  return k;
}

}  // namespace

std::string_view to_string(Border b) noexcept {
  switch (b) {
    case Border::Reflect: return "reflect";
    case Border::Replicate: return "replicate";
    case Border::Zero: return "zero";
  }
  return "?";
}

Border parse_border(std::string_view s) {
  if (s == "reflect") return Border::Reflect;
  if (s == "replicate") return Border::Replicate;
  if (s == "zero") return Border::Zero;
  throw DomainError("unknown border mode '" + std::string(s) + "'");
}

int border_index(int i, int n, Border border) noexcept {
  if (i >= 0 && i < n) return i;
  switch (border) {
    case Border::Zero:
      return -1;
    case Border::Replicate:
      return i < 0 ? 0 : n - 1;
    case Border::Reflect: {
      if (n == 1) return 0;
      const int period = 2 * (n - 1);
      int m = i % period;
      if (m < 0) m += period;
      return m < n ? m : period - m;
    }
  }
  return -1;
}

ImageGray conv_rows(const ImageGray& img, KernelView k, Border border) {
  detail::check_kernel(img, k);
  const int w = img.width();
  const int h = img.height();
  const int n = static_cast<int>(k.taps.size());
  const int pad_left = n - 1 - k.center;
  ImageGray out(w, h);
#pragma omp parallel
  {
    std::vector<double> line(static_cast<std::size_t>(w + n - 1));
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      const auto src = img.row(y);
      for (int t = 0; t < w + n - 1; ++t) {
        const int s = border_index(t - pad_left, w, border);
        line[t] = s < 0 ? 0.0 : src[s];
      }
      auto dst = out.row(y);
      // out(x) = sum_j k[j] * in(x + c - j) = sum_j k[j] * line[x + n - 1 - j]
      for (int x = 0; x < w; ++x) {
        const double* p = line.data() + x + n - 1;
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += k.taps[j] * p[-j];
        dst[x] = sum;
      }
    }
  }
  return out;
}

ImageGray conv_cols(const ImageGray& img, KernelView k, Border border) {
  detail::check_kernel(img, k);
  const int w = img.width();
  const int h = img.height();
  const int n = static_cast<int>(k.taps.size());
  const int pad_top = n - 1 - k.center;
  const int padded = h + n - 1;
  const int blocks = (w + kColumnBlock - 1) / kColumnBlock;
  ImageGray out(w, h);
#pragma omp parallel
  {
    std::vector<double> panel(static_cast<std::size_t>(padded) * kColumnBlock);
    std::vector<double> acc(kColumnBlock);
#pragma omp for schedule(static)
    for (int b = 0; b < blocks; ++b) {
      const int x0 = b * kColumnBlock;
      const int bw = std::min(kColumnBlock, w - x0);
      for (int t = 0; t < padded; ++t) {
        const int s = border_index(t - pad_top, h, border);
        double* dst = panel.data() + static_cast<std::size_t>(t) * kColumnBlock;
        if (s < 0) {
          std::fill(dst, dst + bw, 0.0);
        } else {
          const auto src = img.row(s);
          std::copy(src.begin() + x0, src.begin() + x0 + bw, dst);
        }
      }
      for (int y = 0; y < h; ++y) {
        std::fill(acc.begin(), acc.begin() + bw, 0.0);
        for (int j = 0; j < n; ++j) {
          const double kj = k.taps[j];
          const double* p = panel.data() + static_cast<std::size_t>(y + n - 1 - j) * kColumnBlock;
          for (int cx = 0; cx < bw; ++cx) acc[cx] += kj * p[cx];
        }
        std::copy(acc.begin(), acc.begin() + bw, out.row(y).begin() + x0);
      }
    }
  }
  return out;
}

ImageGray conv_separable(const ImageGray& img, KernelView k_row, KernelView k_col, Border border) {
  return conv_cols(conv_rows(img, k_row, border), k_col, border);
}

ImageGray conv_rows(const ImageGray& img, const Kernel1D& k, Border border) {
  require_real(k);
  return conv_rows(img, real_part(k), border);
}

ImageGray conv_cols(const ImageGray& img, const Kernel1D& k, Border border) {
  require_real(k);
  return conv_cols(img, real_part(k), border);
}

ComplexImage conv_rows_complex(const ImageGray& img, const Kernel1D& k, Border border) {
  ComplexImage out{conv_rows(img, real_part(k), border), {}};
  out.im = k.is_complex() ? conv_rows(img, imag_part(k), border) : ImageGray(img.width(), img.height());
  return out;
}

ComplexImage conv_cols_complex(const ComplexImage& img, const Kernel1D& k, Border border) {
  const bool img_complex = !img.im.empty();
  const ImageGray rr = conv_cols(img.re, real_part(k), border);
  if (!k.is_complex()) {
    return {rr, img_complex ? conv_cols(img.im, real_part(k), border) : ImageGray(img.re.width(), img.re.height())};
  }
  const ImageGray ri = conv_cols(img.re, imag_part(k), border);
  if (!img_complex) return {rr, ri};
  const ImageGray ir = conv_cols(img.im, real_part(k), border);
  const ImageGray ii = conv_cols(img.im, imag_part(k), border);
  // (a + ib)(c + id) = (ac - bd) + i(ad + bc)
  return {combine(rr, 1.0, ii, -1.0), combine(ri, 1.0, ir, 1.0)};
}

ImageGray conv_separable(const ImageGray& img, const Kernel1D& k_row, const Kernel1D& k_col, Border border) {
  require_real(k_row);
  require_real(k_col);
  return conv_separable(img, real_part(k_row), real_part(k_col), border);
}

ComplexImage conv_separable_complex(const ImageGray& img, const Kernel1D& k_row, const Kernel1D& k_col,
                                    Border border) {
  return conv_cols_complex(conv_rows_complex(img, k_row, border), k_col, border);
}

double OrientedParams::xi0() const { return xi_mag * std::cos(theta); }
double OrientedParams::xi1() const { return xi_mag * std::sin(theta); }

ImageGray oriented_energy(const ImageGray& img, const OrientedParams& p, int kernel_radius, Border border) {
  if (!std::isfinite(p.theta) || !std::isfinite(p.xi_mag) || !std::isfinite(p.alpha)) {
    throw DomainError("oriented parameters must be finite");
  }
  if (!(p.xi_mag > 0.0)) throw DomainError("frequency magnitude must be positive");
  if (!(p.alpha > 0.0)) throw DomainError("alpha must be positive");
  if (kernel_radius < 1) throw DomainError("kernel radius must be at least 1");

  const auto gx = complex_gabor_taps(p.alpha, p.xi0(), kernel_radius);
  const auto gy = complex_gabor_taps(p.alpha, p.xi1(), kernel_radius);
  const auto ex = complex_gabor_taps(p.alpha, 0.0, kernel_radius);

  std::complex<double> sgx, sgy;
  double se = 0.0;
  for (const auto& v : gx) sgx += v;
  for (const auto& v : gy) sgy += v;
  for (const auto& v : ex) se += v.real();
  const std::complex<double> c = sgx * sgy / (se * se);

  const Kernel1D kx = to_kernel(gx, kernel_radius);
  const Kernel1D ky = to_kernel(gy, kernel_radius);
  Kernel1D ke = to_kernel(ex, kernel_radius);
  ke.im.clear();

  const ComplexImage g = conv_separable_complex(img, kx, ky, border);
  const ImageGray e = conv_separable(img, ke, ke, border);

  ImageGray energy(img.width(), img.height());
  const auto n = static_cast<long>(img.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double re = g.re[i] - c.real() * e[i];
    const double im = g.im[i] - c.imag() * e[i];
    energy[i] = re * re + im * im;
  }
  return energy;
}

OrientationMax orientation_max(const ImageGray& img, std::span<const OrientedParams> params, int kernel_radius,
                               Border border) {
  if (params.empty()) throw DomainError("orientation_max needs at least one orientation");
  OrientationMax out{oriented_energy(img, params[0], kernel_radius, border),
                     std::vector<int>(img.size(), 0)};
  for (std::size_t o = 1; o < params.size(); ++o) {
    const ImageGray e = oriented_energy(img, params[o], kernel_radius, border);
    for (std::size_t i = 0; i < img.size(); ++i) {
      if (e[i] > out.energy[i]) {
        out.energy[i] = e[i];
        out.argmax[i] = static_cast<int>(o);
      }
    }
  }
  return out;
}

}  // namespace gaborpd
