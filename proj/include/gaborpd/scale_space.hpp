#pragma once

#include <vector>

#include "gaborpd/gabor_kernel.hpp"
#include "gaborpd/image.hpp"
#include "gaborpd/separable_conv.hpp"

namespace gaborpd {

/// Geometric ladder sigma_k = sigma0 * ratio^k, k < levels.
struct ScaleLadder {
  double sigma0 = 1.6;
  double ratio = 1.2;
  int levels = 8;

  void validate() const;
  std::vector<double> sigmas() const;
};

/// Smoothed image derivatives at one differentiation scale, in intensity per
/// pixel^order. Scale normalization (sigma_d^n) is applied by the detectors
/// where the second-moment and Hessian measures call for it.
struct DerivativeMaps {
  double sigma_d = 0.0;
  Family family = Family::GaussianDerivative;
  ImageGray Ix, Iy, Ixx, Iyy, Ixy;
  /// max |I| of the source image; detectors use it to tell round-off from signal.
  double source_peak = 0.0;

  double noise_floor() const noexcept { return 1e-10 * (source_peak > 0.0 ? source_peak : 1.0); }
};

/// Calibrated 1D operators for one family and scale: `first` returns dI/dx on
/// a ramp, `second` returns d2I/dx2 on x^2/2 (and zero on constants), `smooth`
/// has unit sum.
struct OperatorKernels {
  Taps first;
  Taps second;
  Taps smooth;
};

OperatorKernels make_operator_kernels(Family family, double sigma);

/// Throws DomainError for sigma_d < 0.5 and SizeError if the image is smaller
/// than the kernel support.
DerivativeMaps build_maps(const ImageGray& img, Family family, double sigma_d, Border border = Border::Reflect);

std::vector<DerivativeMaps> build_pyramid(const ImageGray& img, Family family, const ScaleLadder& ladder,
                                          Border border = Border::Reflect);

}  // namespace gaborpd
