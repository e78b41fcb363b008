#include "gaborpd/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

void require_maps(const DerivativeMaps& m) {
  if (m.Ix.empty() || !m.Ix.same_shape(m.Iy) || !m.Ix.same_shape(m.Ixx) || !m.Ix.same_shape(m.Iyy) ||
      !m.Ix.same_shape(m.Ixy)) {
    throw SizeError("derivative maps are empty or differ in size");
  }
}

/// Raster-order tie rule: a neighbour scanned earlier must be strictly
/// smaller, a later one merely not larger.
bool beats(double v, double neighbour, bool neighbour_earlier) {
  return neighbour_earlier ? v > neighbour : v >= neighbour;
}

/// 1D parabola vertex offset through three samples, clamped to half a step.
double parabola_offset(double left, double mid, double right) {
  const double denom = left - 2.0 * mid + right;
  if (!(std::abs(denom) > 0.0)) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

std::vector<double> gaussian_window(double sigma, int radius) {
  std::vector<double> g(2 * radius + 1);
  double s = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    g[j + radius] = std::exp(-0.5 * j * j / (sigma * sigma));
    s += g[j + radius];
  }
  for (double& v : g) v /= s;
  return g;
}

/// Smallest value considered signal for a measure of the given intensity power.
double significance(const DerivativeMaps& m, int power) {
  return std::pow(1e-8 * (m.source_peak > 0.0 ? m.source_peak : 1.0), power);
}

Ellipse shape_from_moments(double m11, double m12, double m22, double sigma, double max_anisotropy) {
  const double radius = kRegionScale * sigma;
  const double tr = m11 + m22;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (m11 - m22) * (m11 - m22) + m12 * m12));
  double l1 = 0.5 * tr + disc;
  double l2 = 0.5 * tr - disc;
  if (!(l1 > 0.0) || !std::isfinite(l1)) return Ellipse::circle(radius);
  const double max_ratio = max_anisotropy * max_anisotropy;
  const double l2_min = l1 / max_ratio;
  if (l2 < l2_min) l2 = l2_min;
  // Rebuild with the clamped eigenvalue along the same eigenvectors.
  double vx = 1.0, vy = 0.0;
  if (disc > 0.0) {
    const double ex = m12;
    const double ey = (0.5 * tr + disc) - m11;
    const double en = std::hypot(ex, ey);
    if (en > 0.0) {
      vx = ex / en;
      vy = ey / en;
    } else if (m22 > m11) {
      vx = 0.0;
      vy = 1.0;
    }
  }
  const double a = l1 * vx * vx + l2 * vy * vy;
  const double b = (l1 - l2) * vx * vy;
  const double c = l1 * vy * vy + l2 * vx * vx;
  const double scale = 1.0 / (radius * radius * std::sqrt(l1 * l2));
  return {a * scale, b * scale, c * scale};
}

struct Candidate {
  double x, y, sigma, response;
  int level, px, py;
};

void sort_and_truncate(std::vector<Keypoint>& kps, std::size_t max_count) {
  std::stable_sort(kps.begin(), kps.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.response != b.response) return a.response > b.response;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  if (kps.size() > max_count) kps.resize(max_count);
}

}  // namespace

double Ellipse::equivalent_radius() const noexcept { return std::sqrt(1.0 / std::sqrt(det())); }

Ellipse Ellipse::circle(double radius) noexcept {
  const double v = 1.0 / (radius * radius);
  return {v, 0.0, v};
}

ImageGray edge_modulus(const DerivativeMaps& maps) {
  require_maps(maps);
  ImageGray m(maps.Ix.width(), maps.Ix.height());
  const auto n = static_cast<long>(m.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) m[i] = std::hypot(maps.Ix[i], maps.Iy[i]);
  return m;
}

EdgeMap detect_edges(const DerivativeMaps& maps, double threshold) {
  if (std::isnan(threshold) || threshold < 0.0) throw DomainError("edge threshold must be non-negative");
  EdgeMap out;
  out.strength = edge_modulus(maps);
  out.sigma_d = maps.sigma_d;
  const int w = out.strength.width();
  const int h = out.strength.height();
  out.mask = Mask(w, h);
  if (std::isinf(threshold)) {
    out.threshold = threshold;
    return out;
  }
  const ImageGray& M = out.strength;
  out.threshold = threshold * max_value(M);
  const double floor = maps.noise_floor();

#pragma omp parallel for schedule(static)
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const double v = M.at(x, y);
      if (v <= floor || v < out.threshold) continue;
      double angle = std::atan2(maps.Iy.at(x, y), maps.Ix.at(x, y)) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 180.0;
      // (dx, dy) points to the neighbour later in raster order.
      int dx = 1, dy = 0;
      if (angle >= 22.5 && angle < 67.5) {
        dx = 1;
        dy = 1;
      } else if (angle >= 67.5 && angle < 112.5) {
        dx = 0;
        dy = 1;
      } else if (angle >= 112.5 && angle < 157.5) {
        dx = -1;
        dy = 1;
      }
      const bool keep = beats(v, M.at(x + dx, y + dy), false) && beats(v, M.at(x - dx, y - dy), true);
      if (keep) out.mask.set(x, y, true);
    }
  }
  return out;
}

EdgeMap detect_edges_zero_crossing(const DerivativeMaps& maps, double strength_floor) {
  if (std::isnan(strength_floor) || strength_floor < 0.0) {
    throw DomainError("zero-crossing strength floor must be non-negative");
  }
  EdgeMap out;
  out.strength = edge_modulus(maps);
  out.sigma_d = maps.sigma_d;
  const int w = out.strength.width();
  const int h = out.strength.height();
  out.mask = Mask(w, h);
  const ImageGray& M = out.strength;
  out.threshold = std::isinf(strength_floor) ? strength_floor : strength_floor * max_value(M);
  const double floor = maps.noise_floor();

  ImageGray lap(w, h);
  for (std::size_t i = 0; i < lap.size(); ++i) lap[i] = maps.Ixx[i] + maps.Iyy[i];

  auto consider = [&](int x0, int y0, int x1, int y1) {
    const double a = lap.at(x0, y0);
    const double b = lap.at(x1, y1);
    if (!((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0))) return;
    const bool first = std::abs(a) <= std::abs(b);
    const int x = first ? x0 : x1;
    const int y = first ? y0 : y1;
    const double m = M.at(x, y);
    if (m > floor && m >= out.threshold) out.mask.set(x, y, true);
  };
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      if (x + 1 < w - 1) consider(x, y, x + 1, y);
      if (y + 1 < h - 1) consider(x, y, x, y + 1);
    }
  }
  return out;
}

SecondMomentMatrix second_moment(const DerivativeMaps& maps, double sigma_i, Border border) {
  require_maps(maps);
  if (!std::isfinite(sigma_i) || !(sigma_i > 0.0)) throw DomainError("sigma_i must be positive");
  const int w = maps.Ix.width();
  const int h = maps.Ix.height();
  const double s2 = maps.sigma_d * maps.sigma_d;
  ImageGray xx(w, h), xy(w, h), yy(w, h);
  for (std::size_t i = 0; i < xx.size(); ++i) {
    const double ix = maps.Ix[i];
    const double iy = maps.Iy[i];
    xx[i] = s2 * ix * ix;
    xy[i] = s2 * ix * iy;
    yy[i] = s2 * iy * iy;
  }
  const int r = static_cast<int>(std::ceil(kDefaultRadiusSigmas * sigma_i));
  const std::vector<double> g = gaussian_window(sigma_i, r);
  const KernelView kv{g, r};
  SecondMomentMatrix smm;
  smm.mu11 = conv_separable(xx, kv, kv, border);
  smm.mu12 = conv_separable(xy, kv, kv, border);
  smm.mu22 = conv_separable(yy, kv, kv, border);
  smm.sigma_i = sigma_i;
  smm.sigma_d = maps.sigma_d;
  return smm;
}

ImageGray harris_response(const SecondMomentMatrix& smm, double k) {
  if (!(k > 0.0 && k < 0.25)) throw DomainError("Harris k must lie in (0, 0.25)");
  ImageGray r(smm.mu11.width(), smm.mu11.height());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double a = smm.mu11[i], b = smm.mu12[i], c = smm.mu22[i];
    const double tr = a + c;
    r[i] = (a * c - b * b) - k * tr * tr;
  }
  return r;
}

ImageGray shi_tomasi_response(const SecondMomentMatrix& smm) {
  ImageGray r(smm.mu11.width(), smm.mu11.height());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double a = smm.mu11[i], b = smm.mu12[i], c = smm.mu22[i];
    const double t = a + c;
    const double d = a * c - b * b;
    r[i] = 0.5 * (t - std::sqrt(std::max(t * t - 4.0 * d, 0.0)));
  }
  return r;
}

ImageGray hessian_det(const DerivativeMaps& maps) {
  require_maps(maps);
  const double s4 = std::pow(maps.sigma_d, 4);
  ImageGray r(maps.Ixx.width(), maps.Ixx.height());
  const auto n = static_cast<long>(r.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) r[i] = s4 * (maps.Ixx[i] * maps.Iyy[i] - maps.Ixy[i] * maps.Ixy[i]);
  return r;
}

Ellipse ellipse_at(const DerivativeMaps& maps, int x, int y, double sigma, double sigma_i, double max_anisotropy) {
  require_maps(maps);
  const int w = maps.Ix.width();
  const int h = maps.Ix.height();
  const int r = static_cast<int>(std::ceil(3.0 * sigma_i));
  double m11 = 0.0, m12 = 0.0, m22 = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    const int yy = border_index(y + dy, h, Border::Reflect);
    for (int dx = -r; dx <= r; ++dx) {
      const int xx = border_index(x + dx, w, Border::Reflect);
      const double g = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma_i * sigma_i));
      const double ix = maps.Ix.at(xx, yy);
      const double iy = maps.Iy.at(xx, yy);
      m11 += g * ix * ix;
      m12 += g * ix * iy;
      m22 += g * iy * iy;
    }
  }
  return shape_from_moments(m11, m12, m22, sigma, max_anisotropy);
}

std::vector<Keypoint> detect_blobs(std::span<const DerivativeMaps> pyramid, const BlobConfig& config) {
  if (pyramid.empty()) throw DomainError("blob detection needs a non-empty pyramid");
  if (std::isnan(config.threshold) || config.threshold < 0.0) throw DomainError("blob threshold must be non-negative");
  const int levels = static_cast<int>(pyramid.size());
  std::vector<ImageGray> det;
  det.reserve(levels);
  double global_max = 0.0;
  for (const auto& m : pyramid) {
    det.push_back(hessian_det(m));
    global_max = std::max(global_max, max_value(det.back()));
  }
  if (!(global_max > significance(pyramid.front(), 2)) || std::isinf(config.threshold)) return {};
  const double thr = config.threshold * global_max;
  const int w = det[0].width();
  const int h = det[0].height();

  // Interior levels only once the ladder is long enough to bracket a maximum.
  const int l0 = levels >= 3 ? 1 : 0;
  const int l1 = levels >= 3 ? levels - 2 : levels - 1;

  std::vector<std::vector<Candidate>> per_level(levels);
#pragma omp parallel for schedule(dynamic)
  for (int l = l0; l <= l1; ++l) {
    for (int y = 1; y < h - 1; ++y) {
      for (int x = 1; x < w - 1; ++x) {
        const double v = det[l].at(x, y);
        if (v <= 0.0 || v < thr) continue;
        bool is_max = true;
        for (int dl = -1; dl <= 1 && is_max; ++dl) {
          const int ll = l + dl;
          if (ll < 0 || ll >= levels) continue;
          for (int dy = -1; dy <= 1 && is_max; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              if (dl == 0 && dy == 0 && dx == 0) continue;
              const bool earlier = dl < 0 || (dl == 0 && (dy < 0 || (dy == 0 && dx < 0)));
              if (!beats(v, det[ll].at(x + dx, y + dy), earlier)) {
                is_max = false;
                break;
              }
            }
          }
        }
        if (!is_max) continue;
        const double ox = parabola_offset(det[l].at(x - 1, y), v, det[l].at(x + 1, y));
        const double oy = parabola_offset(det[l].at(x, y - 1), v, det[l].at(x, y + 1));
        double sigma = pyramid[l].sigma_d;
        if (l > 0 && l + 1 < levels) {
          const double os = parabola_offset(det[l - 1].at(x, y), v, det[l + 1].at(x, y));
          const double ratio = pyramid[l + 1].sigma_d / pyramid[l].sigma_d;
          sigma *= std::pow(ratio, os);
        }
        per_level[l].push_back({x + ox, y + oy, sigma, v, l, x, y});
      }
    }
  }

  std::vector<Keypoint> kps;
  for (int l = 0; l < levels; ++l) {
    for (const Candidate& c : per_level[l]) {
      Keypoint k{c.x, c.y, c.sigma, c.response, std::nullopt};
      k.ellipse = ellipse_at(pyramid[c.level], c.px, c.py, c.sigma, config.sigma_i_ratio * pyramid[c.level].sigma_d,
                             config.max_anisotropy);
      kps.push_back(k);
    }
  }
  sort_and_truncate(kps, config.max_count);
  return kps;
}

std::vector<Keypoint> detect_corners(std::span<const DerivativeMaps> pyramid, const CornerConfig& config) {
  if (pyramid.empty()) throw DomainError("corner detection needs a non-empty pyramid");
  if (std::isnan(config.threshold) || config.threshold < 0.0) {
    throw DomainError("corner threshold must be non-negative");
  }
  const int levels = static_cast<int>(pyramid.size());
  std::vector<SecondMomentMatrix> smm;
  std::vector<ImageGray> resp;
  double global_max = 0.0;
  for (const auto& m : pyramid) {
    smm.push_back(second_moment(m, config.sigma_i_ratio * m.sigma_d, config.border));
    resp.push_back(harris_response(smm.back(), config.k));
    global_max = std::max(global_max, max_value(resp.back()));
  }
  if (!(global_max > significance(pyramid.front(), 4)) || std::isinf(config.threshold)) return {};
  const double thr = config.threshold * global_max;
  const int w = resp[0].width();
  const int h = resp[0].height();

  std::vector<Keypoint> all;
  for (int l = 0; l < levels; ++l) {
    const ImageGray& r = resp[l];
    for (int y = 1; y < h - 1; ++y) {
      for (int x = 1; x < w - 1; ++x) {
        const double v = r.at(x, y);
        if (v <= 0.0 || v < thr) continue;
        bool is_max = true;
        for (int dy = -1; dy <= 1 && is_max; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (!beats(v, r.at(x + dx, y + dy), dy < 0 || (dy == 0 && dx < 0))) {
              is_max = false;
              break;
            }
          }
        }
        if (!is_max) continue;
        Keypoint k;
        k.x = x + parabola_offset(r.at(x - 1, y), v, r.at(x + 1, y));
        k.y = y + parabola_offset(r.at(x, y - 1), v, r.at(x, y + 1));
        k.sigma = pyramid[l].sigma_d;
        k.response = v;
        k.ellipse = shape_from_moments(smm[l].mu11.at(x, y), smm[l].mu12.at(x, y), smm[l].mu22.at(x, y), k.sigma,
                                       config.max_anisotropy);
        all.push_back(k);
      }
    }
  }

  // Merge across scales: strongest first, drop weaker responses within the
  // larger of the two detection scales.
  sort_and_truncate(all, std::numeric_limits<std::size_t>::max());
  std::vector<Keypoint> merged;
  for (const Keypoint& k : all) {
    const bool duplicate = std::any_of(merged.begin(), merged.end(), [&](const Keypoint& m) {
      return std::hypot(m.x - k.x, m.y - k.y) < 2.0 * std::max(m.sigma, k.sigma);
    });
    if (!duplicate) merged.push_back(k);
    if (merged.size() >= config.max_count) break;
  }
  return merged;
}

}  // namespace gaborpd
