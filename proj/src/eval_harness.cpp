#include "gaborpd/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <tuple>

#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

constexpr int kPolygonVertices = 128;

struct Pt {
  double x, y;
};

Ellipse region_of(const Keypoint& k) {
  if (k.ellipse && k.ellipse->positive_definite()) return *k.ellipse;
  return Ellipse::circle(kRegionScale * k.sigma);
}

struct Axes {
  double l1, l2;  // eigenvalues, l1 >= l2
  double vx, vy;  // unit eigenvector of l1
};

Axes axes_of(const Ellipse& e) {
  const double tr = e.a + e.c;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (e.a - e.c) * (e.a - e.c) + e.b * e.b));
  Axes ax{0.5 * tr + disc, 0.5 * tr - disc, 1.0, 0.0};
  const double ex = e.b;
  const double ey = ax.l1 - e.a;
  const double n = std::hypot(ex, ey);
  if (n > 1e-300) {
    ax.vx = ex / n;
    ax.vy = ey / n;
  } else if (e.c > e.a) {
    ax.vx = 0.0;
    ax.vy = 1.0;
  }
  return ax;
}

double semi_major(const Ellipse& e) { return 1.0 / std::sqrt(axes_of(e).l2); }

std::vector<Pt> polygon(const Ellipse& e, double cx, double cy) {
  const Axes ax = axes_of(e);
  const double r1 = 1.0 / std::sqrt(ax.l1);
  const double r2 = 1.0 / std::sqrt(ax.l2);
  // (vx, vy) and (-vy, vx) form a right-handed basis, so increasing t runs
  // counter-clockwise in (x, y).
  std::vector<Pt> p(kPolygonVertices);
  for (int i = 0; i < kPolygonVertices; ++i) {
    const double t = 2.0 * std::numbers::pi * i / kPolygonVertices;
    const double u = r1 * std::cos(t);
    const double v = r2 * std::sin(t);
    p[i] = {cx + u * ax.vx - v * ax.vy, cy + u * ax.vy + v * ax.vx};
  }
  return p;
}

double area(const std::vector<Pt>& p) {
  double s = 0.0;
  for (std::size_t i = 0, n = p.size(); i < n; ++i) {
    const Pt& a = p[i];
    const Pt& b = p[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

/// Sutherland-Hodgman clip of `subject` against the convex CCW polygon `clip`.
std::vector<Pt> clip_convex(std::vector<Pt> subject, const std::vector<Pt>& clip) {
  std::vector<Pt> out;
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Pt a = clip[e];
    const Pt b = clip[(e + 1) % clip.size()];
    auto side = [&](const Pt& p) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); };
    out.clear();
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Pt& cur = subject[i];
      const Pt& prev = subject[(i + subject.size() - 1) % subject.size()];
      const double sc = side(cur);
      const double sp = side(prev);
      if (sc >= 0.0) {
        if (sp < 0.0) {
          const double t = sp / (sp - sc);
          out.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
        }
        out.push_back(cur);
      } else if (sp >= 0.0) {
        const double t = sp / (sp - sc);
        out.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
      }
    }
    subject.swap(out);
  }
  return subject;
}

double ellipse_overlap_error(const Ellipse& e1, double x1, double y1, const Ellipse& e2, double x2, double y2) {
  if (std::hypot(x1 - x2, y1 - y2) >= semi_major(e1) + semi_major(e2)) return 1.0;
  const auto p1 = polygon(e1, x1, y1);
  const auto p2 = polygon(e2, x2, y2);
  const double a1 = area(p1);
  const double a2 = area(p2);
  const auto inter = clip_convex(p1, p2);
  const double ai = inter.size() >= 3 ? std::abs(area(inter)) : 0.0;
  const double uni = a1 + a2 - ai;
  if (!(uni > 0.0)) return 1.0;
  return std::clamp(1.0 - ai / uni, 0.0, 1.0);
}

double bilinear(const ImageGray& img, double x, double y, Border border) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  auto px = [&](int xi, int yi) {
    const int bx = border_index(xi, img.width(), border);
    const int by = border_index(yi, img.height(), border);
    return (bx < 0 || by < 0) ? 0.0 : img.at(bx, by);
  };
  const double top = px(x0, y0) * (1.0 - fx) + (fx > 0.0 ? px(x0 + 1, y0) * fx : 0.0);
  if (!(fy > 0.0)) return top;
  const double bottom = px(x0, y0 + 1) * (1.0 - fx) + (fx > 0.0 ? px(x0 + 1, y0 + 1) * fx : 0.0);
  return top * (1.0 - fy) + bottom * fy;
}

bool inside(double x, double y, int w, int h) { return x >= 0.0 && y >= 0.0 && x <= w - 1.0 && y <= h - 1.0; }

}  // namespace

ImageGray warp_image(const ImageGray& img, const Homography& H, Border border, int out_width, int out_height) {
  if (img.empty()) throw SizeError("empty image");
  const int w = out_width > 0 ? out_width : img.width();
  const int h = out_height > 0 ? out_height : img.height();
  const Homography inv = H.inverse();
  ImageGray out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto [sx, sy] = inv.apply(x, y);
      out.at(x, y) = std::isfinite(sx) && std::isfinite(sy) ? bilinear(img, sx, sy, border) : 0.0;
    }
  }
  return out;
}

std::vector<Keypoint> project_keypoints(std::span<const Keypoint> kps, const Homography& H) {
  std::vector<Keypoint> out;
  out.reserve(kps.size());
  for (const Keypoint& k : kps) {
    const Ellipse e = region_of(k);
    const auto [px, py] = H.apply(k.x, k.y);
    const Mat2 J = H.jacobian(k.x, k.y);
    const double det = J[0] * J[3] - J[1] * J[2];
    // M = J^-1
    const Mat2 M = {J[3] / det, -J[1] / det, -J[2] / det, J[0] / det};
    // A' = M^T A M
    const double a00 = e.a * M[0] + e.b * M[2];
    const double a01 = e.a * M[1] + e.b * M[3];
    const double a10 = e.b * M[0] + e.c * M[2];
    const double a11 = e.b * M[1] + e.c * M[3];
    Ellipse p;
    p.a = M[0] * a00 + M[2] * a10;
    p.b = M[0] * a01 + M[2] * a11;
    p.c = M[1] * a01 + M[3] * a11;
    Keypoint q = k;
    q.x = px;
    q.y = py;
    q.ellipse = p;
    q.sigma = p.equivalent_radius() / kRegionScale;
    out.push_back(q);
  }
  return out;
}

double overlap_error(const Keypoint& k1, const Keypoint& k2) {
  return ellipse_overlap_error(region_of(k1), k1.x, k1.y, region_of(k2), k2.x, k2.y);
}

RepeatabilityResult repeatability(std::span<const Keypoint> kps_a, std::span<const Keypoint> kps_b,
                                  const Homography& H, double overlap_threshold, const SharedRegion& shared) {
  if (!(overlap_threshold > 0.0 && overlap_threshold < 1.0)) {
    throw DomainError("overlap threshold must lie in (0, 1)");
  }
  const auto projected = project_keypoints(kps_a, H);
  const Homography inv = H.inverse();

  std::vector<int> ia, ib;
  for (std::size_t i = 0; i < projected.size(); ++i) {
    if (inside(projected[i].x, projected[i].y, shared.width_b, shared.height_b) &&
        inside(kps_a[i].x, kps_a[i].y, shared.width_a, shared.height_a)) {
      ia.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t j = 0; j < kps_b.size(); ++j) {
    const auto [bx, by] = inv.apply(kps_b[j].x, kps_b[j].y);
    if (inside(bx, by, shared.width_a, shared.height_a) &&
        inside(kps_b[j].x, kps_b[j].y, shared.width_b, shared.height_b)) {
      ib.push_back(static_cast<int>(j));
    }
  }

  RepeatabilityResult r;
  r.detections_a = static_cast<int>(ia.size());
  r.detections_b = static_cast<int>(ib.size());
  if (ia.empty() || ib.empty()) return r;

  std::vector<std::tuple<double, int, int>> pairs;
  for (int i : ia) {
    const Ellipse ea = region_of(projected[i]);
    const double ra = ea.equivalent_radius();
    for (int j : ib) {
      const Ellipse eb = region_of(kps_b[j]);
      const double rb = eb.equivalent_radius();
      // Rescale both regions about their centres so their mean radius is 30 px.
      const double s = kNormalizedRegionRadius / std::sqrt(ra * rb);
      const Ellipse na{ea.a / (s * s), ea.b / (s * s), ea.c / (s * s)};
      const Ellipse nb{eb.a / (s * s), eb.b / (s * s), eb.c / (s * s)};
      const double err =
          ellipse_overlap_error(na, projected[i].x, projected[i].y, nb, kps_b[j].x, kps_b[j].y);
      if (err <= overlap_threshold) pairs.emplace_back(err, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<char> used_a(kps_a.size(), 0), used_b(kps_b.size(), 0);
  for (const auto& [err, i, j] : pairs) {
    if (used_a[i] || used_b[j]) continue;
    used_a[i] = used_b[j] = 1;
    ++r.correspondences;
  }
  r.score = static_cast<double>(r.correspondences) / std::min(r.detections_a, r.detections_b);
  return r;
}

double RepeatabilityReport::mean() const noexcept {
  if (per_pair.empty()) return 0.0;
  double s = 0.0;
  for (const auto& p : per_pair) s += p.repeatability;
  return s / static_cast<double>(per_pair.size());
}

std::vector<RepeatabilityReport> run_comparison(const ImageGray& img, std::span<const ViewPair> sequence,
                                                std::span<const Family> families, const DetectorConfig& config) {
  if (!(config.overlap_threshold > 0.0 && config.overlap_threshold < 1.0)) {
    throw DomainError("overlap threshold must lie in (0, 1)");
  }
  std::vector<ImageGray> views;
  views.reserve(sequence.size());
  for (const ViewPair& v : sequence) views.push_back(warp_image(img, v.H, Border::Reflect));

  std::vector<RepeatabilityReport> reports;
  for (Family family : families) {
    RepeatabilityReport rep;
    rep.family = family;
    const auto ref_pyr = build_pyramid(img, family, config.ladder, config.border);
    const auto ref_kps = detect_blobs(ref_pyr, config.blob);
    for (std::size_t v = 0; v < sequence.size(); ++v) {
      const auto pyr = build_pyramid(views[v], family, config.ladder, config.border);
      const auto kps = detect_blobs(pyr, config.blob);
      const SharedRegion shared{img.width(), img.height(), views[v].width(), views[v].height()};
      const RepeatabilityResult r = repeatability(ref_kps, kps, sequence[v].H, config.overlap_threshold, shared);
      rep.per_pair.push_back({sequence[v].label, r.detections_a, r.detections_b, r.correspondences, r.score});
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

void write_report_csv(std::ostream& os, std::span<const RepeatabilityReport> reports) {
  os << "family,pair,detections_a,detections_b,correspondences,repeatability\n";
  for (const auto& rep : reports) {
    for (const auto& p : rep.per_pair) {
      os << to_string(rep.family) << ',' << p.label << ',' << p.detections_a << ',' << p.detections_b << ','
         << p.correspondences << ',' << std::fixed << std::setprecision(6) << p.repeatability << '\n';
      os.unsetf(std::ios::floatfield);
    }
  }
}

}  // namespace gaborpd
