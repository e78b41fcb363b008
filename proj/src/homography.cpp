#include "gaborpd/homography.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>

#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

double det3(const std::array<double, 9>& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

}  // namespace

Homography::Homography() : h_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Homography::Homography(const std::array<double, 9>& h) : h_(h) {
  for (double v : h_) {
    if (!std::isfinite(v)) throw DomainError("homography entries must be finite");
  }
  if (h_[8] == 0.0) throw DomainError("homography h[2][2] must be non-zero");
  const double s = h_[8];
  for (double& v : h_) v /= s;
  if (!(std::abs(det3(h_)) > 1e-12)) throw DomainError("homography is singular");
}

Homography Homography::translation(double tx, double ty) { return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1}); }

Homography Homography::scaling(double s) { return Homography({s, 0, 0, 0, s, 0, 0, 0, 1}); }

Homography Homography::viewpoint(double angle_rad, double focal, double cx, double cy) {
  if (!(focal > 0.0)) throw DomainError("focal length must be positive");
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  // Centred: u' = u cos / (1 - u sin / f), v' = v / (1 - u sin / f).
  const Homography centred({c, 0, 0, 0, 1, 0, -s / focal, 0, 1});
  return translation(cx, cy) * centred * translation(-cx, -cy);
}

std::pair<double, double> Homography::apply(double x, double y) const {
  const double w = h_[6] * x + h_[7] * y + h_[8];
  return {(h_[0] * x + h_[1] * y + h_[2]) / w, (h_[3] * x + h_[4] * y + h_[5]) / w};
}

Mat2 Homography::jacobian(double x, double y) const {
  const double w = h_[6] * x + h_[7] * y + h_[8];
  const double u = h_[0] * x + h_[1] * y + h_[2];
  const double v = h_[3] * x + h_[4] * y + h_[5];
  const double w2 = w * w;
  return {(h_[0] * w - u * h_[6]) / w2, (h_[1] * w - u * h_[7]) / w2, (h_[3] * w - v * h_[6]) / w2,
          (h_[4] * w - v * h_[7]) / w2};
}

double Homography::det() const noexcept { return det3(h_); }

Homography Homography::inverse() const {
  const auto& m = h_;
  const std::array<double, 9> adj = {
      m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
      m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
      m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3],
  };
  return Homography(adj);
}

Homography Homography::operator*(const Homography& rhs) const {
  std::array<double, 9> r{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += h_[3 * i + k] * rhs.h_[3 * k + j];
      r[3 * i + j] = s;
    }
  }
  return Homography(r);
}

Homography read_homography(std::istream& is) {
  std::array<double, 9> h{};
  for (double& v : h) {
    if (!(is >> v)) throw FormatError("homography needs nine numbers");
  }
  return Homography(h);
}

void write_homography(std::ostream& os, const Homography& h) {
  os << std::setprecision(17);
  for (int r = 0; r < 3; ++r) {
    os << h(r, 0) << ' ' << h(r, 1) << ' ' << h(r, 2) << '\n';
  }
}

}  // namespace gaborpd
