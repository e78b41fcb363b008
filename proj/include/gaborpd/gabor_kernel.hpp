#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaborpd {

enum class Parity { Odd, Even, Complex };
enum class Family { GaussianDerivative, Gabor, Haar };
enum class DerivativeOrder { First = 1, Second = 2 };

std::string_view to_string(Parity p) noexcept;
std::string_view to_string(Family f) noexcept;
Parity parse_parity(std::string_view s);
/// Accepts "gaussian", "gaussian_derivative", "gabor", "haar".
Family parse_family(std::string_view s);

/// Parameters of one Gabor wavelet: envelope alpha = 1/(2 sigma^2), angular
/// frequency xi (rad/sample), dilation a and shift b.
struct GaborParams {
  double alpha = 0.05;
  double xi = 0.0;
  double scale_a = 1.0;
  double shift_b = 0.0;
  Parity parity = Parity::Complex;

  /// Envelope standard deviation before dilation, sqrt(1 / (2 alpha)).
  double sigma() const;
  /// Throws DomainError unless alpha > 0, a > 0 and everything is finite.
  void validate() const;
};

/// Discrete kernel. `re` always holds samples; `im` is non-empty only for
/// complex kernels. Offsets run from -center_index to size()-1-center_index,
/// so even-length kernels (Haar step pairs) are symmetric about center-1/2.
struct Kernel1D {
  std::vector<double> re;
  std::vector<double> im;
  int center_index = 0;
  int truncation_radius = 0;

  // Provenance, carried into the text export.
  Family family = Family::Gabor;
  Parity parity = Parity::Even;
  double alpha = 0.0;
  double xi = 0.0;
  double scale = 1.0;

  std::size_t size() const noexcept { return re.size(); }
  bool is_complex() const noexcept { return !im.empty(); }
  /// Point of (anti)symmetry in index units, (size - 1) / 2.
  double symmetry_point() const noexcept { return (static_cast<double>(re.size()) - 1.0) / 2.0; }
  /// Euclidean norm over both planes.
  double norm() const noexcept;
};

struct OperatorTarget {
  DerivativeOrder order = DerivativeOrder::First;
  double sigma_target = 1.0;
};

struct GaborFit {
  GaborParams params;
  /// L2 distance between the unit-norm Gabor component and the unit-norm target.
  double residual = 0.0;
};

/// One complex wavelet whose single xi serves both parts.
struct CompromiseFit {
  GaborParams params;
  double residual = 0.0;  // odd_residual + even_residual
  double odd_residual = 0.0;
  double even_residual = 0.0;
};

/// Gaussian sigma of the derivative targets used for the alpha = 0.05 fits.
/// Recovered by scanning sigma_target until the odd and even fits land on
/// xi = 0.45 and 0.65 (see tests/test_gabor_fit_oracle.cpp).
inline constexpr double kCalibrationAlpha = 0.05;
inline constexpr double kCalibrationTargetSigma = 2.31;
/// Envelope alpha of the Gabor that approximates unit-sigma derivatives.
inline constexpr double kReferenceAlpha = kCalibrationAlpha * kCalibrationTargetSigma * kCalibrationTargetSigma;

inline constexpr double kDefaultRadiusSigmas = 4.0;
inline constexpr double kFitGridStep = 0.01;
inline constexpr double kFitHalfWidthSigmas = 6.0;
inline constexpr double kCoarseXiStep = 0.01;
inline constexpr double kXiResolution = 1e-4;

/// |a|^-1/2 sqrt(alpha/pi) exp(-alpha u^2) exp(-i xi u), u = (x - b) / a.
/// Odd parity keeps only the imaginary part, even only the real part.
std::complex<double> eval_gabor(const GaborParams& params, double x);

/// Samples on the integer grid b + k, |k| <= ceil(radius_sigmas * sigma * a),
/// removes the mean of odd kernels, then scales to unit Euclidean norm.
Kernel1D discretize(const GaborParams& params, double radius_sigmas = kDefaultRadiusSigmas);

/// Unit-norm sampled derivative of a Gaussian: -x G for first order,
/// -(x^2/s^4 - 1/s^2) G (the negated second derivative) for second order.
double derivative_target(DerivativeOrder order, double sigma, double x);

/// Generic xi fit of one Gabor component (odd or even) at fixed alpha against
/// an arbitrary target profile, on the dense grid |x| <= half_width.
GaborFit fit_xi_to_profile(const std::function<double(double)>& target, double alpha, Parity parity,
                           double half_width);

/// Fits the odd (first order) or even (second order) Gabor component to the
/// derivative-of-Gaussian target. With alpha_fixed empty, alpha is optimized too.
GaborFit fit_to_derivative(const OperatorTarget& target, std::optional<double> alpha_fixed);

/// Target sigma that keeps the alpha = 0.05 / sigma_target = 2.31 geometry.
double default_target_sigma(double alpha);

CompromiseFit fit_complex_compromise(double alpha_fixed);
CompromiseFit fit_complex_compromise(double alpha_fixed, double sigma_target);

/// Gabor parameters approximating the derivative of a Gaussian with standard
/// deviation sigma: the unit-sigma reference fit dilated by a = sigma.
GaborParams gabor_for_derivative(DerivativeOrder order, double sigma);

/// Unit-norm comparison kernels for the three operator families.
Kernel1D make_comparison_kernel(Family family, DerivativeOrder order, double sigma);

/// Text export: two '#' header lines then one sample per line ("re im" for
/// complex kernels).
void write_kernel_text(std::ostream& os, const Kernel1D& k);
Kernel1D read_kernel_text(std::istream& is);

}  // namespace gaborpd
