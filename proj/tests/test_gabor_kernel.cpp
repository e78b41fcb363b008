#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gaborpd/errors.hpp"
#include "gaborpd/gabor_kernel.hpp"
#include "support.hpp"

using namespace gaborpd;
using gaborpd::testing::Rand;

namespace {

// Independent distance between the unit-norm Gabor component and the unit-norm
// target, straight from the atom formula on a 0.01-step grid.
double oracle_distance(double alpha, double xi, Parity parity, DerivativeOrder order, double s) {
  const double sg = std::sqrt(0.5 / alpha);
  const double hw = 6.0 * std::max(s, sg);
  double gg = 0.0, tt = 0.0, gt = 0.0;
  for (int i = -static_cast<int>(hw / 0.01); i <= static_cast<int>(hw / 0.01); ++i) {
    const double x = i * 0.01;
    const double env = std::exp(-alpha * x * x);
    const double g = parity == Parity::Odd ? -std::sin(xi * x) * env : std::cos(xi * x) * env;
    const double G = std::exp(-x * x / (2 * s * s));
    const double t = order == DerivativeOrder::First ? -x * G : (1.0 / (s * s) - x * x / (s * s * s * s)) * G;
    gg += g * g;
    tt += t * t;
    gt += g * t;
  }
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * gt / std::sqrt(gg * tt)));
}

Kernel1D read_golden(const std::string& name) {
  std::ifstream in(std::string(GABORPD_TEST_DATA) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  return read_kernel_text(in);
}

}  // namespace

TEST(EvalGabor, ValuesAtOrigin) {
  const GaborParams even{0.05, 0.3, 1.0, 0.0, Parity::Even};
  EXPECT_NEAR(eval_gabor(even, 0.0).real(), 0.126157, 1e-6);
  EXPECT_EQ(eval_gabor(even, 0.0).imag(), 0.0);
  const GaborParams odd{0.05, 0.45, 1.0, 0.0, Parity::Odd};
  EXPECT_EQ(std::abs(eval_gabor(odd, 0.0)), 0.0);
}

TEST(EvalGabor, DilationExample) {
  const GaborParams a2{0.05, 0.79, 2.0, 0.0, Parity::Complex};
  const GaborParams a1{0.05, 0.79, 1.0, 0.0, Parity::Complex};
  const auto lhs = eval_gabor(a2, 1.0);
  const auto rhs = eval_gabor(a1, 0.5) / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-15);
}

TEST(EvalGabor, MatchesClosedForm) {
  const GaborParams p{0.2, 0.7, 1.5, 0.3, Parity::Complex};
  const double x = 1.9;
  const double u = (x - 0.3) / 1.5;
  const std::complex<double> expect =
      std::pow(1.5, -0.5) * std::sqrt(0.2 / std::numbers::pi) * std::exp(-0.2 * u * u) * std::polar(1.0, -0.7 * u);
  EXPECT_NEAR(std::abs(eval_gabor(p, x) - expect), 0.0, 1e-15);
}

TEST(EvalGabor, RejectsBadParameters) {
  EXPECT_THROW(eval_gabor({0.0, 0.1, 1.0, 0.0, Parity::Odd}, 0.0), DomainError);
  EXPECT_THROW(eval_gabor({0.1, 0.1, -1.0, 0.0, Parity::Odd}, 0.0), DomainError);
  EXPECT_THROW(eval_gabor({0.1, 0.1, 1.0, 0.0, Parity::Odd}, std::nan("")), DomainError);
}

TEST(Discretize, ElevenTapKernel) {
  // sigma * a = 1.25 with radius 4 sigma gives centre +- 5.
  const double alpha = 1.0 / (2.0 * 1.25 * 1.25);
  const Kernel1D k = discretize({alpha, 1.2, 1.0, 0.0, Parity::Complex}, 4.0);
  EXPECT_EQ(k.size(), 11u);
  EXPECT_EQ(k.center_index, 5);
  EXPECT_TRUE(k.is_complex());
}

TEST(Discretize, ErrorsOnTinyOrBadRadius) {
  EXPECT_THROW(discretize({0.05, 0.4, 1.0, 0.0, Parity::Odd}, 1.5), DomainError);
  EXPECT_THROW(discretize({0.05, 0.0, 1.0, 0.0, Parity::Odd}), DegenerateKernelError);
}

TEST(DiscretizeProperty, NormParitySumAndDc) {
  Rand r(101);
  for (int t = 0; t < 200; ++t) {
    GaborParams p;
    p.alpha = r.uniform(0.01, 1.5);
    p.xi = r.uniform(0.0, 2.5);
    p.scale_a = r.uniform(0.3, 4.0);
    p.parity = static_cast<Parity>(r.integer(0, 2));
    const double radius = r.uniform(2.0, 5.0);
    Kernel1D k;
    try {
      k = discretize(p, radius);
    } catch (const DegenerateKernelError&) {
      continue;
    }
    SCOPED_TRACE(t);
    ASSERT_NEAR(k.norm(), 1.0, 1e-9);
    const int c = k.center_index;
    ASSERT_EQ(static_cast<int>(k.size()), 2 * c + 1);
    double sum = 0.0;
    for (double v : k.re) sum += v;
    for (int i = 1; i <= c; ++i) {
      if (p.parity == Parity::Odd) {
        ASSERT_NEAR(k.re[c + i], -k.re[c - i], 1e-12);
      } else if (p.parity == Parity::Even) {
        ASSERT_NEAR(k.re[c + i], k.re[c - i], 1e-12);
      } else {
        ASSERT_NEAR(k.re[c + i], k.re[c - i], 1e-12);
        ASSERT_NEAR(k.im[c + i], -k.im[c - i], 1e-12);
      }
    }
    if (p.parity == Parity::Odd) {
      ASSERT_NEAR(sum, 0.0, 1e-12);
      // Constant signal response, scaled by the constant.
      const double konst = r.uniform(-100.0, 100.0);
      double resp = 0.0;
      for (double v : k.re) resp += v * konst;
      ASSERT_LE(std::abs(resp), 1e-10 * std::abs(konst));
    }
  }
}

TEST(DilationProperty, ScaleIdentity) {
  Rand r(102);
  for (int t = 0; t < 100; ++t) {
    GaborParams p{r.uniform(0.01, 2.0), r.uniform(-2.0, 2.0), 1.0, r.uniform(-2.0, 2.0),
                  static_cast<Parity>(r.integer(0, 2))};
    const double x = r.uniform(-10.0, 10.0);
    for (double a : {0.5, 1.0, 2.0, 4.0}) {
      GaborParams pa = p;
      pa.scale_a = a;
      // Shift scales with the dilation so that (x - b)/a maps to (x/a - b/a).
      GaborParams p1 = p;
      p1.shift_b = p.shift_b / a;
      const auto lhs = eval_gabor(pa, x);
      const auto rhs = eval_gabor(p1, x / a) / std::sqrt(a);
      ASSERT_LE(std::abs(lhs - rhs), 1e-12 * std::abs(rhs) + 1e-300) << "a=" << a;
    }
  }
}

TEST(DerivativeTarget, ShapesAndSigns) {
  EXPECT_DOUBLE_EQ(derivative_target(DerivativeOrder::First, 2.0, 0.0), 0.0);
  EXPECT_LT(derivative_target(DerivativeOrder::First, 2.0, 1.0), 0.0);
  EXPECT_GT(derivative_target(DerivativeOrder::Second, 2.0, 0.0), 0.0);
  EXPECT_LT(derivative_target(DerivativeOrder::Second, 2.0, 3.0), 0.0);
}

TEST(FitToDerivative, FixedAlphaValues) {
  const GaborFit odd = fit_to_derivative({DerivativeOrder::First, kCalibrationTargetSigma}, kCalibrationAlpha);
  const GaborFit even = fit_to_derivative({DerivativeOrder::Second, kCalibrationTargetSigma}, kCalibrationAlpha);
  EXPECT_NEAR(odd.params.xi, 0.45, 0.05);
  EXPECT_NEAR(even.params.xi, 0.65, 0.05);
  EXPECT_EQ(odd.params.parity, Parity::Odd);
  EXPECT_EQ(even.params.parity, Parity::Even);
  EXPECT_DOUBLE_EQ(odd.params.alpha, kCalibrationAlpha);
  // Residuals agree with the independent distance.
  EXPECT_NEAR(odd.residual,
              oracle_distance(kCalibrationAlpha, odd.params.xi, Parity::Odd, DerivativeOrder::First, kCalibrationTargetSigma), 1e-9);
  EXPECT_NEAR(even.residual,
              oracle_distance(kCalibrationAlpha, even.params.xi, Parity::Even, DerivativeOrder::Second, kCalibrationTargetSigma),
              1e-9);
}

TEST(FitToDerivative, LocalOptimality) {
  for (auto order : {DerivativeOrder::First, DerivativeOrder::Second}) {
    for (double s : {1.5, kCalibrationTargetSigma, 3.5}) {
      const double alpha = kCalibrationAlpha * (kCalibrationTargetSigma / s) * (kCalibrationTargetSigma / s);
      const GaborFit f = fit_to_derivative({order, s}, alpha);
      const Parity par = f.params.parity;
      const double d0 = oracle_distance(alpha, f.params.xi, par, order, s);
      EXPECT_LT(d0, oracle_distance(alpha, f.params.xi + 0.02, par, order, s));
      EXPECT_LT(d0, oracle_distance(alpha, f.params.xi - 0.02, par, order, s));
    }
  }
}

TEST(FitToDerivative, SelfFitRecoversXi) {
  for (double xi : {0.35, 0.6, 1.1}) {
    const double alpha = 0.08;
    auto self = [&](double x) { return -std::sin(xi * x) * std::exp(-alpha * x * x); };
    const GaborFit f = fit_xi_to_profile(self, alpha, Parity::Odd, 6.0 * std::sqrt(0.5 / alpha));
    EXPECT_NEAR(f.params.xi, xi, 1e-3);
    EXPECT_LT(f.residual, 1e-3);
  }
}

TEST(FitToDerivative, FreeAlphaNoWorseThanFixed) {
  const OperatorTarget t{DerivativeOrder::Second, kCalibrationTargetSigma};
  const GaborFit fixed = fit_to_derivative(t, kCalibrationAlpha);
  const GaborFit free = fit_to_derivative(t, std::nullopt);
  EXPECT_LE(free.residual, fixed.residual + 1e-9);
  EXPECT_GT(free.params.alpha, 0.0);
}

TEST(FitToDerivative, Errors) {
  EXPECT_THROW(fit_to_derivative({DerivativeOrder::First, -1.0}, 0.05), DomainError);
  EXPECT_THROW(fit_to_derivative({DerivativeOrder::First, 2.0}, 0.0), DomainError);
  // A target the odd component can only match at xi -> 0: no interior minimum.
  EXPECT_THROW(fit_xi_to_profile([](double x) { return -x * std::exp(-0.05 * x * x); }, 0.05, Parity::Odd, 40.0),
               FitError);
}

TEST(CompromiseFit, ResidualDominatesIndividualFits) {
  const CompromiseFit cx = fit_complex_compromise(kCalibrationAlpha);
  const GaborFit odd = fit_to_derivative({DerivativeOrder::First, kCalibrationTargetSigma}, kCalibrationAlpha);
  const GaborFit even = fit_to_derivative({DerivativeOrder::Second, kCalibrationTargetSigma}, kCalibrationAlpha);
  EXPECT_EQ(cx.params.parity, Parity::Complex);
  EXPECT_GE(cx.residual, odd.residual);
  EXPECT_GE(cx.residual, even.residual);
  EXPECT_GE(cx.odd_residual, odd.residual);
  EXPECT_GE(cx.even_residual, even.residual);
  EXPECT_NEAR(cx.residual, cx.odd_residual + cx.even_residual, 1e-12);
  // The shared xi minimizes a sum of two single-bowl distances, so it lies
  // between the two individual optima.
  EXPECT_GT(cx.params.xi, odd.params.xi);
  EXPECT_LT(cx.params.xi, even.params.xi);
}

TEST(ComparisonKernels, GaussianFirstOrder) {
  const Kernel1D k = make_comparison_kernel(Family::GaussianDerivative, DerivativeOrder::First, 2.0);
  ASSERT_EQ(k.size(), 17u);
  std::vector<double> expect(17);
  double n = 0.0;
  for (int i = -8; i <= 8; ++i) {
    expect[i + 8] = -i * std::exp(-i * i / 8.0);
    n += expect[i + 8] * expect[i + 8];
  }
  for (int i = 0; i < 17; ++i) EXPECT_NEAR(k.re[i], expect[i] / std::sqrt(n), 1e-12);
}

TEST(ComparisonKernels, HaarFirstOrderTwoTaps) {
  const Kernel1D k = make_comparison_kernel(Family::Haar, DerivativeOrder::First, 1.0);
  ASSERT_EQ(k.size(), 2u);
  EXPECT_NEAR(std::abs(k.re[0]), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(k.re[0] + k.re[1], 0.0, 1e-15);
}

TEST(ComparisonKernels, HaarSecondOrderBlocks) {
  const Kernel1D k = make_comparison_kernel(Family::Haar, DerivativeOrder::Second, 2.5);
  double sum = 0.0;
  for (double v : k.re) sum += v;
  EXPECT_NEAR(sum, 0.0, 1e-12);
  EXPECT_NEAR(k.norm(), 1.0, 1e-12);
  const int n = static_cast<int>(k.size());
  ASSERT_EQ(n % 3, 0);
  const int w = n / 3;
  for (int i = 0; i < w; ++i) {
    EXPECT_DOUBLE_EQ(k.re[i], k.re[0]);
    EXPECT_DOUBLE_EQ(k.re[w + i], -2.0 * k.re[0]);
    EXPECT_DOUBLE_EQ(k.re[2 * w + i], k.re[0]);
  }
}

TEST(ComparisonKernels, GaborMatchesAtomAtFittedParameters) {
  const GaborParams p = gabor_for_derivative(DerivativeOrder::First, 2.0);
  EXPECT_NEAR(p.alpha, kReferenceAlpha / 4.0, 1e-15);
  const Kernel1D k = make_comparison_kernel(Family::Gabor, DerivativeOrder::First, 2.0);
  const int c = k.center_index;
  double n = 0.0;
  std::vector<double> v(k.size());
  for (int i = -c; i <= c; ++i) {
    v[i + c] = -std::sin(p.xi * i) * std::exp(-p.alpha * i * i);
    n += v[i + c] * v[i + c];
  }
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(k.re[i], v[i] / std::sqrt(n), 1e-12);
}

TEST(ComparisonKernels, DilationOfReferenceFit) {
  for (auto order : {DerivativeOrder::First, DerivativeOrder::Second}) {
    const GaborParams p1 = gabor_for_derivative(order, 1.0);
    const GaborParams p3 = gabor_for_derivative(order, 3.0);
    EXPECT_NEAR(p3.xi * 3.0, p1.xi, 1e-15);
    EXPECT_NEAR(p3.alpha * 9.0, p1.alpha, 1e-15);
  }
}

TEST(ComparisonKernelsProperty, UnitNormAndParity) {
  Rand r(103);
  for (int t = 0; t < 120; ++t) {
    const Family fam = static_cast<Family>(r.integer(0, 2));
    const auto order = r.integer(0, 1) ? DerivativeOrder::First : DerivativeOrder::Second;
    const double s = r.uniform(0.5, 6.0);
    const Kernel1D k = make_comparison_kernel(fam, order, s);
    ASSERT_NEAR(k.norm(), 1.0, 1e-9);
    const int n = static_cast<int>(k.size());
    for (int i = 0; i < n; ++i) {
      const double mirror = k.re[n - 1 - i];
      if (order == DerivativeOrder::First) {
        ASSERT_NEAR(k.re[i], -mirror, 1e-12);
      } else {
        ASSERT_NEAR(k.re[i], mirror, 1e-12);
      }
    }
  }
}

TEST(OperatorReading, PolynomialResponses) {
  // x through the odd kernel: one sign everywhere; x^2 through the even kernel
  // (mean removed): one sign everywhere.
  const Kernel1D odd = discretize(fit_to_derivative({DerivativeOrder::First, kCalibrationTargetSigma}, kCalibrationAlpha).params);
  const Kernel1D even = discretize(fit_to_derivative({DerivativeOrder::Second, kCalibrationTargetSigma}, kCalibrationAlpha).params);
  double mean = 0.0;
  for (double v : even.re) mean += v;
  mean /= static_cast<double>(even.size());
  const int c = odd.center_index;
  int pos_x = 0, neg_x = 0, pos_q = 0, neg_q = 0;
  for (int x0 = -20; x0 <= 20; ++x0) {
    double rx = 0.0, rq = 0.0;
    for (int j = -c; j <= c; ++j) {
      const double x = x0 - j;  // convolution
      rx += odd.re[j + c] * x;
      rq += (even.re[j + c] - mean) * x * x;
    }
    (rx > 0 ? pos_x : neg_x)++;
    (rq > 0 ? pos_q : neg_q)++;
  }
  EXPECT_TRUE(pos_x == 0 || neg_x == 0);
  EXPECT_TRUE(pos_q == 0 || neg_q == 0);
}

TEST(KernelText, RoundTripAndHeader) {
  const Kernel1D k = discretize({0.3, 0.9, 1.0, 0.0, Parity::Complex});
  std::stringstream ss;
  write_kernel_text(ss, k);
  EXPECT_EQ(ss.str().rfind("# family parity alpha xi scale radius\n", 0), 0u);
  const Kernel1D back = read_kernel_text(ss);
  ASSERT_EQ(back.size(), k.size());
  EXPECT_EQ(back.parity, Parity::Complex);
  EXPECT_DOUBLE_EQ(back.xi, k.xi);
  for (std::size_t i = 0; i < k.size(); ++i) {
    EXPECT_DOUBLE_EQ(back.re[i], k.re[i]);
    EXPECT_DOUBLE_EQ(back.im[i], k.im[i]);
  }
}

TEST(KernelText, RejectsMalformed) {
  std::istringstream no_header("0.1\n0.2\n");
  EXPECT_THROW(read_kernel_text(no_header), FormatError);
  std::istringstream garbage("# family parity alpha xi scale radius\n# gabor odd 0.05 0.4 1 1\nabc\n");
  EXPECT_THROW(read_kernel_text(garbage), FormatError);
}

TEST(KernelGolden, FirstOrderFitAtAlpha005) {
  const Kernel1D golden = read_golden("kernel_first_alpha005.txt");
  const Kernel1D k = discretize(fit_to_derivative({DerivativeOrder::First, kCalibrationTargetSigma}, kCalibrationAlpha).params);
  ASSERT_EQ(golden.size(), k.size());
  EXPECT_NEAR(golden.xi, k.xi, 1e-9);
  for (std::size_t i = 0; i < k.size(); ++i) EXPECT_NEAR(golden.re[i], k.re[i], 1e-9);
}

TEST(KernelGolden, ComplexCompromiseAtAlpha005) {
  const Kernel1D golden = read_golden("kernel_complex_alpha005.txt");
  const Kernel1D k = discretize(fit_complex_compromise(kCalibrationAlpha).params);
  ASSERT_EQ(golden.size(), k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    EXPECT_NEAR(golden.re[i], k.re[i], 1e-9);
    EXPECT_NEAR(golden.im[i], k.im[i], 1e-9);
  }
}

TEST(Enums, ParseAndPrint) {
  for (Family f : {Family::GaussianDerivative, Family::Gabor, Family::Haar}) {
    EXPECT_EQ(parse_family(to_string(f)), f);
  }
  EXPECT_EQ(parse_family("gaussian_derivative"), Family::GaussianDerivative);
  for (Parity p : {Parity::Odd, Parity::Even, Parity::Complex}) EXPECT_EQ(parse_parity(to_string(p)), p);
  EXPECT_THROW(parse_family("sobel"), DomainError);
}
