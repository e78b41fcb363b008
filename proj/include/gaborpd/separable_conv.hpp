#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "gaborpd/gabor_kernel.hpp"
#include "gaborpd/image.hpp"

namespace gaborpd {

/// Out-of-range sample policy. Reflect mirrors without repeating the edge
/// sample (-1 -> 1), Replicate clamps, Zero pads with zeros.
enum class Border { Reflect, Replicate, Zero };

std::string_view to_string(Border b) noexcept;
Border parse_border(std::string_view s);

/// Maps a possibly out-of-range index into [0, n), or -1 for zero padding.
int border_index(int i, int n, Border border) noexcept;

/// Non-owning real tap vector. Output at x is sum_j taps[j] * in(x + center - j),
/// i.e. a true convolution. For antisymmetric kernels this flips the sign
/// relative to correlation.
struct KernelView {
  std::span<const double> taps;
  int center = 0;
};

inline KernelView real_part(const Kernel1D& k) { return {k.re, k.center_index}; }
inline KernelView imag_part(const Kernel1D& k) { return {k.im, k.center_index}; }

/// Owning variant used for calibrated operator kernels.
struct Taps {
  std::vector<double> taps;
  int center = 0;
  KernelView view() const { return {taps, center}; }
};

// OpenMP-parallel passes. Results are bit-identical to the serial versions in
// namespace reference (same summation order per pixel).
ImageGray conv_rows(const ImageGray& img, KernelView k, Border border = Border::Reflect);
ImageGray conv_cols(const ImageGray& img, KernelView k, Border border = Border::Reflect);
ImageGray conv_separable(const ImageGray& img, KernelView k_row, KernelView k_col,
                         Border border = Border::Reflect);

/// Kernel1D overloads. Complex kernels produce a two-plane response.
ImageGray conv_rows(const ImageGray& img, const Kernel1D& k, Border border = Border::Reflect);
ImageGray conv_cols(const ImageGray& img, const Kernel1D& k, Border border = Border::Reflect);
ComplexImage conv_rows_complex(const ImageGray& img, const Kernel1D& k, Border border = Border::Reflect);
ComplexImage conv_cols_complex(const ComplexImage& img, const Kernel1D& k, Border border = Border::Reflect);
ImageGray conv_separable(const ImageGray& img, const Kernel1D& k_row, const Kernel1D& k_col,
                         Border border = Border::Reflect);
ComplexImage conv_separable_complex(const ImageGray& img, const Kernel1D& k_row, const Kernel1D& k_col,
                                    Border border = Border::Reflect);

/// Oriented circular Gabor: xi_0 = xi cos(theta) along rows, xi_1 = xi sin(theta)
/// along columns (theta measured from +x towards +y, i.e. downwards).
struct OrientedParams {
  double theta = 0.0;
  double xi_mag = 1.0;
  double alpha = 0.32;

  double xi0() const;
  double xi1() const;
};

/// |response|^2 of the DC-corrected oriented Gabor: the separable complex
/// response minus c times the separable envelope response, with c chosen so
/// the 2D kernel has zero sum.
ImageGray oriented_energy(const ImageGray& img, const OrientedParams& p, int kernel_radius,
                          Border border = Border::Reflect);

struct OrientationMax {
  ImageGray energy;
  std::vector<int> argmax;  // row-major, index into the params list
};

/// Per-pixel maximum energy over orientations; ties resolve to the lowest index.
OrientationMax orientation_max(const ImageGray& img, std::span<const OrientedParams> params,
                               int kernel_radius, Border border = Border::Reflect);

namespace reference {

// Straightforward serial loops, kept as the test and benchmark baseline.
ImageGray conv_rows(const ImageGray& img, KernelView k, Border border);
ImageGray conv_cols(const ImageGray& img, KernelView k, Border border);
ImageGray conv_separable(const ImageGray& img, KernelView k_row, KernelView k_col, Border border);

}  // namespace reference

}  // namespace gaborpd
