#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gaborpd/image.hpp"
#include "gaborpd/scale_space.hpp"

namespace gaborpd {

struct EdgeMap {
  ImageGray strength;  // gradient modulus M
  Mask mask;
  double sigma_d = 0.0;
  /// Absolute threshold applied to `strength` (fraction times max M).
  double threshold = 0.0;
};

/// Region {p : (p - c)^T [a b; b c] (p - c) <= 1}.
struct Ellipse {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;

  bool positive_definite() const noexcept { return a > 0.0 && a * c - b * b > 0.0; }
  double det() const noexcept { return a * c - b * b; }
  /// Radius of the circle with the same area.
  double equivalent_radius() const noexcept;
  static Ellipse circle(double radius) noexcept;
};

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double sigma = 0.0;
  double response = 0.0;
  std::optional<Ellipse> ellipse;
};

/// Measurement region radius in units of the detection scale.
inline constexpr double kRegionScale = 3.0;

struct SecondMomentMatrix {
  ImageGray mu11, mu12, mu22;
  double sigma_i = 0.0;
  double sigma_d = 0.0;
};

struct BlobConfig {
  /// Fraction of the pyramid-wide maximum of the normalized det H.
  double threshold = 0.05;
  std::size_t max_count = 1000;
  double sigma_i_ratio = 1.4;
  /// Largest allowed ratio of ellipse axes.
  double max_anisotropy = 4.0;
};

struct CornerConfig {
  double sigma_i_ratio = 1.4;
  double k = 0.04;
  /// Fraction of the pyramid-wide maximum Harris response.
  double threshold = 0.01;
  std::size_t max_count = 1000;
  double max_anisotropy = 4.0;
  Border border = Border::Reflect;
};

ImageGray edge_modulus(const DerivativeMaps& maps);

/// Modulus maxima along the gradient direction quantized to 4 directions,
/// kept when M >= threshold * max(M). The 1-pixel frame is never marked.
EdgeMap detect_edges(const DerivativeMaps& maps, double threshold);

/// Sign changes of Ixx + Iyy against a 4-neighbour; of the two pixels the one
/// with the smaller |L| is marked, provided M >= strength_floor * max(M).
EdgeMap detect_edges_zero_crossing(const DerivativeMaps& maps, double strength_floor);

/// sigma_d^2 * g(sigma_i) * [Ix^2 IxIy; IxIy Iy^2].
SecondMomentMatrix second_moment(const DerivativeMaps& maps, double sigma_i, Border border = Border::Reflect);

ImageGray harris_response(const SecondMomentMatrix& smm, double k);
ImageGray shi_tomasi_response(const SecondMomentMatrix& smm);
/// sigma_d^4 (Ixx Iyy - Ixy^2).
ImageGray hessian_det(const DerivativeMaps& maps);

std::vector<Keypoint> detect_blobs(std::span<const DerivativeMaps> pyramid, const BlobConfig& config = {});
std::vector<Keypoint> detect_corners(std::span<const DerivativeMaps> pyramid, const CornerConfig& config = {});

/// Affine region from the second-moment matrix at one pixel of a level,
/// scaled to area pi (kRegionScale * sigma)^2.
Ellipse ellipse_at(const DerivativeMaps& maps, int x, int y, double sigma, double sigma_i, double max_anisotropy);

}  // namespace gaborpd
