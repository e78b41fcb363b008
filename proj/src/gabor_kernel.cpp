#include "gaborpd/gabor_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

constexpr double kPi = std::numbers::pi;

double envelope_sigma(double alpha) { return std::sqrt(1.0 / (2.0 * alpha)); }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

void normalize(std::vector<double>& re, std::vector<double>& im) {
  double ss = 0.0;
  for (double v : re) ss += v * v;
  for (double v : im) ss += v * v;
  const double n = std::sqrt(ss);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DegenerateKernelError("kernel has zero norm");
  }
  for (double& v : re) v /= n;
  for (double& v : im) v /= n;
}

void remove_mean(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  const double mean = s / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

/// Dense sample grid for the fits, with unit-norm target already evaluated.
struct FitGrid {
  std::vector<double> x;
  std::vector<double> envelope;
  std::vector<double> target;
};

FitGrid make_grid(const std::function<double(double)>& target, double alpha, double half_width) {
  const int n = static_cast<int>(std::floor(half_width / kFitGridStep));
  FitGrid g;
  g.x.reserve(2 * n + 1);
  for (int i = -n; i <= n; ++i) g.x.push_back(i * kFitGridStep);
  g.envelope.resize(g.x.size());
  g.target.resize(g.x.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    g.envelope[i] = std::exp(-alpha * g.x[i] * g.x[i]);
    g.target[i] = target(g.x[i]);
    ss += g.target[i] * g.target[i];
  }
  const double tn = std::sqrt(ss);
  if (!(tn > 0.0)) throw FitError("target profile vanishes on the fit grid");
  for (double& t : g.target) t /= tn;
  return g;
}

/// || g/|g| - t || for the odd (-sin) or even (cos) component at frequency xi.
double component_distance(const FitGrid& g, Parity parity, double xi) {
  double gg = 0.0;
  double gt = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double phase = xi * g.x[i];
    const double c = parity == Parity::Odd ? -std::sin(phase) : std::cos(phase);
    const double v = c * g.envelope[i];
    gg += v * v;
    gt += v * g.target[i];
  }
  if (!(gg > 0.0)) return std::sqrt(2.0);
  // Both vectors unit norm: |a - b|^2 = 2 - 2 a.b
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * gt / std::sqrt(gg)));
}

/// Coarse scan over (0, pi) then golden-section refinement between the
/// neighbours of the best coarse sample. Returns {xi, value}.
template <typename F>
std::pair<double, double> minimize_xi(F&& objective) {
  const int n = static_cast<int>(std::floor((kPi - 1e-9) / kCoarseXiStep));
  int best = 1;
  double best_val = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    const double v = objective(k * kCoarseXiStep);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  if (best == 1 || best == n) {
    throw FitError("xi minimum not bracketed inside (0, pi)");
  }
  double lo = (best - 1) * kCoarseXiStep;
  double hi = (best + 1) * kCoarseXiStep;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  while (hi - lo > kXiResolution) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = objective(d);
    }
  }
  const double xi = 0.5 * (lo + hi);
  return {xi, objective(xi)};
}

Parity parity_for(DerivativeOrder order) {
  return order == DerivativeOrder::First ? Parity::Odd : Parity::Even;
}

double fit_half_width(double sigma_target, double alpha) {
  return kFitHalfWidthSigmas * std::max(sigma_target, envelope_sigma(alpha));
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string_view to_string(Parity p) noexcept {
  switch (p) {
    case Parity::Odd: return "odd";
    case Parity::Even: return "even";
    case Parity::Complex: return "complex";
  }
  return "?";
}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::GaussianDerivative: return "gaussian";
    case Family::Gabor: return "gabor";
    case Family::Haar: return "haar";
  }
  return "?";
}

Parity parse_parity(std::string_view s) {
  if (s == "odd") return Parity::Odd;
  if (s == "even") return Parity::Even;
  if (s == "complex") return Parity::Complex;
  throw DomainError("unknown parity '" + std::string(s) + "'");
}

Family parse_family(std::string_view s) {
  if (s == "gaussian" || s == "gaussian_derivative") return Family::GaussianDerivative;
  if (s == "gabor") return Family::Gabor;
  if (s == "haar") return Family::Haar;
  throw DomainError("unknown kernel family '" + std::string(s) + "'");
}

double GaborParams::sigma() const { return envelope_sigma(alpha); }

void GaborParams::validate() const {
  require_finite(alpha, "alpha");
  require_finite(xi, "xi");
  require_finite(scale_a, "scale a");
  require_finite(shift_b, "shift b");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!(scale_a > 0.0)) throw DomainError("scale a must be positive");
}

double Kernel1D::norm() const noexcept {
  double ss = 0.0;
  for (double v : re) ss += v * v;
  for (double v : im) ss += v * v;
  return std::sqrt(ss);
}

std::complex<double> eval_gabor(const GaborParams& p, double x) {
  p.validate();
  require_finite(x, "x");
  const double u = (x - p.shift_b) / p.scale_a;
  const double amp = std::sqrt(p.alpha / kPi) * std::exp(-p.alpha * u * u) / std::sqrt(p.scale_a);
  const double re = amp * std::cos(p.xi * u);
  const double im = -amp * std::sin(p.xi * u);
  switch (p.parity) {
    case Parity::Odd: return {0.0, im};
    case Parity::Even: return {re, 0.0};
    case Parity::Complex: break;
  }
  return {re, im};
}

Kernel1D discretize(const GaborParams& p, double radius_sigmas) {
  p.validate();
  require_finite(radius_sigmas, "radius_sigmas");
  if (radius_sigmas < 2.0) throw DomainError("radius_sigmas must be at least 2");
  const double r = std::ceil(radius_sigmas * p.sigma() * p.scale_a);
  if (r > 1e6) throw SizeError("kernel radius too large");
  const int radius = static_cast<int>(r);
  const int n = 2 * radius + 1;
  if (n < 3) throw DegenerateKernelError("kernel shorter than 3 taps");

  Kernel1D k;
  k.center_index = radius;
  k.truncation_radius = radius;
  k.family = Family::Gabor;
  k.parity = p.parity;
  k.alpha = p.alpha;
  k.xi = p.xi;
  k.scale = p.scale_a;
  k.re.assign(n, 0.0);
  if (p.parity == Parity::Complex) k.im.assign(n, 0.0);

  // Evaluate one half and mirror so parity holds bit-for-bit.
  for (int j = 0; j <= radius; ++j) {
    const std::complex<double> v = eval_gabor(p, p.shift_b + j);
    switch (p.parity) {
      case Parity::Odd:
        k.re[radius + j] = v.imag();
        k.re[radius - j] = -v.imag();
        break;
      case Parity::Even:
        k.re[radius + j] = v.real();
        k.re[radius - j] = v.real();
        break;
      case Parity::Complex:
        k.re[radius + j] = v.real();
        k.re[radius - j] = v.real();
        k.im[radius + j] = v.imag();
        k.im[radius - j] = -v.imag();
        break;
    }
  }
  k.re[radius] = p.parity == Parity::Odd ? 0.0 : k.re[radius];
  if (p.parity == Parity::Complex) k.im[radius] = 0.0;

  if (p.parity == Parity::Odd) remove_mean(k.re);
  normalize(k.re, k.im);
  return k;
}

double derivative_target(DerivativeOrder order, double sigma, double x) {
  const double g = std::exp(-x * x / (2.0 * sigma * sigma));
  if (order == DerivativeOrder::First) return -x * g;
  const double s2 = sigma * sigma;
  return -(x * x / (s2 * s2) - 1.0 / s2) * g;
}

GaborFit fit_xi_to_profile(const std::function<double(double)>& target, double alpha, Parity parity,
                           double half_width) {
  require_finite(alpha, "alpha");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (parity == Parity::Complex) throw DomainError("profile fit needs odd or even parity");
  if (!(half_width > 0.0)) throw DomainError("half width must be positive");
  const FitGrid grid = make_grid(target, alpha, half_width);
  const auto [xi, residual] = minimize_xi([&](double xi) { return component_distance(grid, parity, xi); });
  GaborFit fit;
  fit.params = GaborParams{alpha, xi, 1.0, 0.0, parity};
  fit.residual = residual;
  return fit;
}

GaborFit fit_to_derivative(const OperatorTarget& target, std::optional<double> alpha_fixed) {
  require_finite(target.sigma_target, "sigma_target");
  if (!(target.sigma_target > 0.0)) throw DomainError("sigma_target must be positive");
  const Parity parity = parity_for(target.order);
  const double s = target.sigma_target;
  auto profile = [&](double x) { return derivative_target(target.order, s, x); };

  if (alpha_fixed) {
    return fit_xi_to_profile(profile, *alpha_fixed, parity, fit_half_width(s, *alpha_fixed));
  }

  // alpha free: scan log2(alpha / alpha_target) on [-3, 3], then golden
  // refinement between feasible neighbours. Infeasible means the xi minimum
  // ran into the boundary (the odd fit degenerates to xi -> 0 at alpha_target).
  const double alpha_t = 1.0 / (2.0 * s * s);
  auto fit_at = [&](double u) -> std::optional<GaborFit> {
    const double a = alpha_t * std::exp2(u);
    try {
      return fit_xi_to_profile(profile, a, parity, fit_half_width(s, a));
    } catch (const FitError&) {
      return std::nullopt;
    }
  };
  constexpr double kStep = 0.15;
  constexpr int kSteps = 40;
  std::vector<std::optional<GaborFit>> scan;
  int best = -1;
  for (int i = 0; i <= kSteps; ++i) {
    scan.push_back(fit_at(-3.0 + i * kStep));
    if (scan.back() && (best < 0 || scan.back()->residual < scan[best]->residual)) best = i;
  }
  if (best < 0) throw FitError("no alpha in the scan range yields a bracketed xi minimum");
  GaborFit result = *scan[best];
  if (best > 0 && best < kSteps && scan[best - 1] && scan[best + 1]) {
    double lo = -3.0 + (best - 1) * kStep;
    double hi = -3.0 + (best + 1) * kStep;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    while (hi - lo > 1e-3) {
      const double c = hi - invphi * (hi - lo);
      const double d = lo + invphi * (hi - lo);
      const auto fc = fit_at(c);
      const auto fd = fit_at(d);
      if (!fc || !fd) break;
      if (fc->residual < result.residual) result = *fc;
      if (fd->residual < result.residual) result = *fd;
      if (fc->residual < fd->residual) {
        hi = d;
      } else {
        lo = c;
      }
    }
  }
  return result;
}

double default_target_sigma(double alpha) {
  return kCalibrationTargetSigma / envelope_sigma(kCalibrationAlpha) * envelope_sigma(alpha);
}

CompromiseFit fit_complex_compromise(double alpha_fixed) {
  require_finite(alpha_fixed, "alpha");
  if (!(alpha_fixed > 0.0)) throw DomainError("alpha must be positive");
  return fit_complex_compromise(alpha_fixed, default_target_sigma(alpha_fixed));
}

CompromiseFit fit_complex_compromise(double alpha_fixed, double sigma_target) {
  require_finite(alpha_fixed, "alpha");
  require_finite(sigma_target, "sigma_target");
  if (!(alpha_fixed > 0.0)) throw DomainError("alpha must be positive");
  if (!(sigma_target > 0.0)) throw DomainError("sigma_target must be positive");
  const double hw = fit_half_width(sigma_target, alpha_fixed);
  const FitGrid odd = make_grid(
      [&](double x) { return derivative_target(DerivativeOrder::First, sigma_target, x); }, alpha_fixed, hw);
  const FitGrid even = make_grid(
      [&](double x) { return derivative_target(DerivativeOrder::Second, sigma_target, x); }, alpha_fixed, hw);
  const auto [xi, total] = minimize_xi([&](double xi) {
    return component_distance(odd, Parity::Odd, xi) + component_distance(even, Parity::Even, xi);
  });
  CompromiseFit fit;
  fit.params = GaborParams{alpha_fixed, xi, 1.0, 0.0, Parity::Complex};
  fit.residual = total;
  fit.odd_residual = component_distance(odd, Parity::Odd, xi);
  fit.even_residual = component_distance(even, Parity::Even, xi);
  return fit;
}

GaborParams gabor_for_derivative(DerivativeOrder order, double sigma) {
  require_finite(sigma, "sigma");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  // Reference fits at unit sigma, computed once. Dilation by a = sigma gives
  // alpha / sigma^2 and xi / sigma in sample units.
  static const std::array<GaborFit, 2> reference = {
      fit_to_derivative({DerivativeOrder::First, 1.0}, kReferenceAlpha),
      fit_to_derivative({DerivativeOrder::Second, 1.0}, kReferenceAlpha),
  };
  const GaborFit& ref = reference[order == DerivativeOrder::First ? 0 : 1];
  GaborParams p = ref.params;
  p.alpha = ref.params.alpha / (sigma * sigma);
  p.xi = ref.params.xi / sigma;
  return p;
}

Kernel1D make_comparison_kernel(Family family, DerivativeOrder order, double sigma) {
  require_finite(sigma, "sigma");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");

  if (family == Family::Gabor) {
    return discretize(gabor_for_derivative(order, sigma), kDefaultRadiusSigmas);
  }

  Kernel1D k;
  k.family = family;
  k.parity = order == DerivativeOrder::First ? Parity::Odd : Parity::Even;
  k.scale = sigma;

  if (family == Family::GaussianDerivative) {
    const int radius = static_cast<int>(std::ceil(kDefaultRadiusSigmas * sigma));
    k.alpha = 1.0 / (2.0 * sigma * sigma);
    k.center_index = radius;
    k.truncation_radius = radius;
    k.re.assign(2 * radius + 1, 0.0);
    const double s2 = sigma * sigma;
    for (int j = 0; j <= radius; ++j) {
      const double x = j;
      const double g = std::exp(-x * x / (2.0 * s2));
      if (order == DerivativeOrder::First) {
        k.re[radius + j] = -x * g;
        k.re[radius - j] = x * g;
      } else {
        const double v = (x * x / s2 - 1.0) * g;
        k.re[radius + j] = v;
        k.re[radius - j] = v;
      }
    }
    std::vector<double> none;
    normalize(k.re, none);
    return k;
  }

  // Haar: step pair over 2 ceil(sigma) samples; second order as three blocks
  // (+1, -2, +1) of odd width so the kernel stays centred on a sample.
  const int n = static_cast<int>(std::ceil(sigma));
  if (order == DerivativeOrder::First) {
    k.re.assign(2 * n, 1.0);
    std::fill(k.re.begin(), k.re.begin() + n, -1.0);
    k.center_index = n;
    k.truncation_radius = n;
  } else {
    const int w = n | 1;
    k.re.assign(3 * w, 1.0);
    std::fill(k.re.begin() + w, k.re.begin() + 2 * w, -2.0);
    k.center_index = (3 * w - 1) / 2;
    k.truncation_radius = k.center_index;
  }
  std::vector<double> none;
  normalize(k.re, none);
  return k;
}

void write_kernel_text(std::ostream& os, const Kernel1D& k) {
  os << "# family parity alpha xi scale radius\n";
  os << "# " << to_string(k.family) << ' ' << to_string(k.parity) << ' ' << format_double(k.alpha) << ' '
     << format_double(k.xi) << ' ' << format_double(k.scale) << ' ' << k.truncation_radius << '\n';
  for (std::size_t i = 0; i < k.re.size(); ++i) {
    os << format_double(k.re[i]);
    if (k.is_complex()) os << ' ' << format_double(k.im[i]);
    os << '\n';
  }
}

Kernel1D read_kernel_text(std::istream& is) {
  Kernel1D k;
  std::string line;
  bool have_meta = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string fam, par;
      if (hs >> fam >> par && fam != "family") {
        k.family = parse_family(fam);
        k.parity = parse_parity(par);
        if (!(hs >> k.alpha >> k.xi >> k.scale >> k.truncation_radius)) {
          throw FormatError("malformed kernel header: " + line);
        }
        have_meta = true;
      }
      continue;
    }
    std::istringstream ls(line);
    double re = 0.0;
    if (!(ls >> re)) throw FormatError("malformed kernel sample: " + line);
    k.re.push_back(re);
    if (k.parity == Parity::Complex) {
      double im = 0.0;
      if (!(ls >> im)) throw FormatError("complex kernel sample needs two columns: " + line);
      k.im.push_back(im);
    }
  }
  if (!have_meta) throw FormatError("kernel file lacks the metadata header");
  if (k.re.empty()) throw FormatError("kernel file has no samples");
  k.center_index = static_cast<int>(k.re.size() / 2);
  return k;
}

}  // namespace gaborpd
