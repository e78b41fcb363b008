#pragma once

#include <array>
#include <iosfwd>
#include <utility>

namespace gaborpd {

/// 2x2 row-major matrix.
using Mat2 = std::array<double, 4>;

/// Planar projective map, stored row-major with h[8] normalized to 1.
class Homography {
public:
  Homography();  // identity
  /// Throws DomainError when |det| <= 1e-12 or h[8] == 0.
  explicit Homography(const std::array<double, 9>& h);

  static Homography identity() { return Homography(); }
  static Homography translation(double tx, double ty);
  static Homography scaling(double s);
  /// Planar scene rotated by `angle_rad` about the vertical axis through the
  /// image centre, seen by a pinhole camera with focal length `focal` (pixels).
  static Homography viewpoint(double angle_rad, double focal, double cx, double cy);

  const std::array<double, 9>& matrix() const noexcept { return h_; }
  double operator()(int r, int c) const noexcept { return h_[3 * r + c]; }

  std::pair<double, double> apply(double x, double y) const;
  /// Jacobian of the projected point with respect to (x, y).
  Mat2 jacobian(double x, double y) const;
  Homography inverse() const;
  double det() const noexcept;

  /// this * rhs (apply rhs first).
  Homography operator*(const Homography& rhs) const;

private:
  std::array<double, 9> h_;
};

/// Nine whitespace-separated numbers, row-major.
Homography read_homography(std::istream& is);
void write_homography(std::ostream& os, const Homography& h);

}  // namespace gaborpd
