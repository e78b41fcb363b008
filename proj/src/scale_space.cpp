#include "gaborpd/scale_space.hpp"

#include <cmath>

#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

std::vector<double> gaussian_samples(double alpha, int center, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double o = static_cast<double>(j) - center;
    g[j] = std::exp(-alpha * o * o);
  }
  return g;
}

Taps calibrate_first(const Kernel1D& k) {
  // Response to I(x) = x is -sum_j k[j] * offset_j; scale it to 1.
  double moment = 0.0;
  for (std::size_t j = 0; j < k.re.size(); ++j) {
    moment += k.re[j] * (static_cast<double>(j) - k.center_index);
  }
  Taps t{k.re, k.center_index};
  for (double& v : t.taps) v /= -moment;
  return t;
}

Taps calibrate_second(const Kernel1D& k, double envelope_alpha) {
  Taps t{k.re, k.center_index};
  // Cancel the DC response with a multiple of the envelope. Haar blocks are
  // already zero-sum, which leaves them untouched up to round-off.
  if (envelope_alpha > 0.0) {
    const auto env = gaussian_samples(envelope_alpha, k.center_index, k.re.size());
    double sk = 0.0, se = 0.0;
    for (std::size_t j = 0; j < env.size(); ++j) {
      sk += t.taps[j];
      se += env[j];
    }
    const double c = sk / se;
    for (std::size_t j = 0; j < env.size(); ++j) t.taps[j] -= c * env[j];
  }
  // Response to I(x) = x^2 / 2 is sum_j k[j] * offset_j^2 / 2; scale it to 1.
  double moment = 0.0;
  for (std::size_t j = 0; j < t.taps.size(); ++j) {
    const double o = static_cast<double>(j) - t.center;
    moment += t.taps[j] * o * o;
  }
  for (double& v : t.taps) v *= 2.0 / moment;
  return t;
}

Taps unit_sum(std::vector<double> taps, int center) {
  double s = 0.0;
  for (double v : taps) s += v;
  for (double& v : taps) v /= s;
  return {std::move(taps), center};
}

}  // namespace

void ScaleLadder::validate() const {
  if (!std::isfinite(sigma0) || !(sigma0 > 0.0)) throw DomainError("ladder sigma0 must be positive");
  if (!std::isfinite(ratio) || !(ratio > 1.0)) throw DomainError("ladder ratio must exceed 1");
  if (levels < 1) throw DomainError("ladder needs at least one level");
}

std::vector<double> ScaleLadder::sigmas() const {
  validate();
  std::vector<double> s(levels);
  for (int k = 0; k < levels; ++k) s[k] = sigma0 * std::pow(ratio, k);
  return s;
}

OperatorKernels make_operator_kernels(Family family, double sigma) {
  const Kernel1D d1 = make_comparison_kernel(family, DerivativeOrder::First, sigma);
  const Kernel1D d2 = make_comparison_kernel(family, DerivativeOrder::Second, sigma);
  OperatorKernels ops;
  ops.first = calibrate_first(d1);

  switch (family) {
    case Family::GaussianDerivative:
      ops.second = calibrate_second(d2, 1.0 / (2.0 * sigma * sigma));
      break;
    case Family::Gabor:
      ops.second = calibrate_second(d2, d2.alpha);
      break;
    case Family::Haar:
      ops.second = calibrate_second(d2, 0.0);
      break;
  }

  if (family == Family::Haar) {
    const int n = static_cast<int>(std::ceil(sigma));
    ops.smooth = unit_sum(std::vector<double>(2 * n + 1, 1.0), n);
  } else {
    // The Gabor family smooths across the derivative axis with the plain
    // Gaussian at the same sigma (xi = 0 along that axis).
    const int r = static_cast<int>(std::ceil(kDefaultRadiusSigmas * sigma));
    ops.smooth = unit_sum(gaussian_samples(1.0 / (2.0 * sigma * sigma), r, 2 * r + 1), r);
  }
  return ops;
}

DerivativeMaps build_maps(const ImageGray& img, Family family, double sigma_d, Border border) {
  if (!std::isfinite(sigma_d) || sigma_d < 0.5) throw DomainError("sigma_d must be at least 0.5 pixel");
  if (img.empty()) throw SizeError("empty image");
  const OperatorKernels ops = make_operator_kernels(family, sigma_d);

  const ImageGray r1 = conv_rows(img, ops.first.view(), border);
  const ImageGray r2 = conv_rows(img, ops.second.view(), border);
  const ImageGray r0 = conv_rows(img, ops.smooth.view(), border);

  DerivativeMaps m;
  m.sigma_d = sigma_d;
  m.family = family;
  m.source_peak = max_abs(img);
  m.Ix = conv_cols(r1, ops.smooth.view(), border);
  m.Ixy = conv_cols(r1, ops.first.view(), border);
  m.Iy = conv_cols(r0, ops.first.view(), border);
  m.Iyy = conv_cols(r0, ops.second.view(), border);
  m.Ixx = conv_cols(r2, ops.smooth.view(), border);
  return m;
}

std::vector<DerivativeMaps> build_pyramid(const ImageGray& img, Family family, const ScaleLadder& ladder,
                                          Border border) {
  std::vector<DerivativeMaps> out;
  for (double s : ladder.sigmas()) out.push_back(build_maps(img, family, s, border));
  return out;
}

}  // namespace gaborpd
