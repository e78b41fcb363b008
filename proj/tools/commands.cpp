#include "commands.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "gaborpd/errors.hpp"
#include "gaborpd/gabor_kernel.hpp"
#include "gaborpd/run_config.hpp"
#include "gaborpd/scale_space.hpp"
#include "gaborpd/synthetic.hpp"

namespace gaborpd::cli {

namespace {

std::string num(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? p : buf);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  return out;
}

struct Ramp {
  std::uint8_t r, g, b;
};

Ramp rank_colour(std::size_t rank, std::size_t n) {
  const double t = n > 1 ? static_cast<double>(rank) / static_cast<double>(n - 1) : 0.0;
  // red -> yellow -> green -> blue
  static constexpr double stops[4][3] = {{255, 0, 0}, {255, 230, 0}, {0, 200, 0}, {0, 90, 255}};
  const double s = t * 3.0;
  const int i = std::min(2, static_cast<int>(s));
  const double f = s - i;
  auto mix = [&](int c) { return static_cast<std::uint8_t>(std::lround(stops[i][c] * (1 - f) + stops[i + 1][c] * f)); };
  return {mix(0), mix(1), mix(2)};
}

void draw_ellipse(RgbImage& canvas, double cx, double cy, const Ellipse& e, Ramp col) {
  const double tr = e.a + e.c;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (e.a - e.c) * (e.a - e.c) + e.b * e.b));
  const double l1 = 0.5 * tr + disc;
  const double l2 = 0.5 * tr - disc;
  if (!(l2 > 0.0)) return;
  double vx = e.b, vy = l1 - e.a;
  const double n = std::hypot(vx, vy);
  if (n > 1e-300) {
    vx /= n;
    vy /= n;
  } else {
    vx = e.a >= e.c ? 1.0 : 0.0;
    vy = e.a >= e.c ? 0.0 : 1.0;
  }
  const double r1 = 1.0 / std::sqrt(l1);
  const double r2 = 1.0 / std::sqrt(l2);
  const int steps = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r2 * 2.0)));
  for (int i = 0; i < steps; ++i) {
    const double t = 2.0 * std::numbers::pi * i / steps;
    const double u = r1 * std::cos(t);
    const double v = r2 * std::sin(t);
    canvas.set(static_cast<int>(std::lround(cx + u * vx - v * vy)), static_cast<int>(std::lround(cy + u * vy + v * vx)),
               col.r, col.g, col.b);
  }
}

ImageGray load_input(const std::string& path, std::uint64_t seed) {
  if (path == "synthetic") return structured_scene(320, 240, seed);
  return read_image(path);
}

struct Global {
  std::string config;
  std::string border;
  std::uint64_t seed = 7;
  int threads = 0;
};

RunConfig resolve_config(const Global& g) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : load_run_config(g.config);
  if (!g.border.empty()) cfg.border = parse_border(g.border);
  return cfg;
}

// kernel ---------------------------------------------------------------------

struct KernelArgs {
  double alpha = kCalibrationAlpha;
  std::string fit = "first";
  double sigma_target = 0.0;
  std::string out = "kernel.txt";
  std::string profile;
};

void render_profile(const Kernel1D& k, const std::string& path) {
  const int cell = 6;
  const int w = static_cast<int>(k.size()) * cell;
  const int h = 160;
  RgbImage img(w, h);
  double peak = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    peak = std::max(peak, std::abs(k.re[i]));
    if (k.is_complex()) peak = std::max(peak, std::abs(k.im[i]));
  }
  const int mid = h / 2;
  for (int x = 0; x < w; ++x) img.set(x, mid, 80, 80, 80);
  auto plot = [&](const std::vector<double>& v, Ramp col, int offset) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const int y = mid - static_cast<int>(std::lround(v[i] / (peak > 0 ? peak : 1.0) * (mid - 4)));
      const int x = static_cast<int>(i) * cell + offset;
      for (int yy = std::min(y, mid); yy <= std::max(y, mid); ++yy) img.set(x, yy, col.r, col.g, col.b);
    }
  };
  plot(k.re, {255, 255, 255}, 2);
  if (k.is_complex()) plot(k.im, {255, 140, 0}, 3);
  write_png(path, img);
}

int cmd_kernel(const KernelArgs& a, std::ostream& out) {
  if (!(a.alpha > 0.0)) throw DomainError("alpha must be positive");
  const double sigma_t = a.sigma_target > 0.0 ? a.sigma_target : default_target_sigma(a.alpha);
  GaborParams params;
  double residual = 0.0;
  std::optional<CompromiseFit> compromise;
  if (a.fit == "first" || a.fit == "second") {
    const auto order = a.fit == "first" ? DerivativeOrder::First : DerivativeOrder::Second;
    const GaborFit f = fit_to_derivative({order, sigma_t}, a.alpha);
    params = f.params;
    residual = f.residual;
  } else if (a.fit == "complex") {
    const CompromiseFit f = fit_complex_compromise(a.alpha, sigma_t);
    params = f.params;
    residual = f.residual;
    compromise = f;
  } else {
    throw DomainError("--fit must be first, second or complex");
  }
  const Kernel1D k = discretize(params);
  auto file = open_out(a.out);
  write_kernel_text(file, k);
  out << std::fixed << std::setprecision(4) << "fit " << a.fit << " alpha " << a.alpha << " sigma_target "
      << sigma_t << " xi " << params.xi << " residual " << residual << " taps " << k.size() << '\n';
  out.unsetf(std::ios::floatfield);
  if (compromise) {
    out << "odd_residual " << std::setprecision(6) << compromise->odd_residual << " even_residual "
        << compromise->even_residual << '\n';
  }
  if (!a.profile.empty()) render_profile(k, a.profile);
  return 0;
}

// detect ---------------------------------------------------------------------

struct DetectArgs {
  std::string input;
  std::string family;
  std::string detector;
  std::string keypoints_out;
  std::string visualization_out;
};

int cmd_detect(const Global& g, const DetectArgs& a, std::ostream& out) {
  RunConfig cfg = resolve_config(g);
  if (!a.family.empty()) cfg.family = parse_family(a.family);
  if (!a.detector.empty()) cfg.detector = parse_detector(a.detector);
  if (!a.keypoints_out.empty()) cfg.keypoints_out = a.keypoints_out;
  if (!a.visualization_out.empty()) cfg.visualization_out = a.visualization_out;
  cfg.validate();

  const ImageGray img = load_input(a.input, g.seed);
  std::vector<Keypoint> kps;
  std::optional<Mask> edges;
  switch (cfg.detector) {
    case DetectorKind::Edge: {
      const DerivativeMaps maps = build_maps(img, cfg.family, cfg.edge_sigma, cfg.border);
      const EdgeMap em = cfg.edge_method == EdgeMethod::Maxima ? detect_edges(maps, cfg.edge_threshold)
                                                               : detect_edges_zero_crossing(maps, cfg.edge_threshold);
      for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
          if (em.mask.at(x, y)) {
            kps.push_back({static_cast<double>(x), static_cast<double>(y), cfg.edge_sigma, em.strength.at(x, y),
                           Ellipse::circle(cfg.edge_sigma)});
          }
        }
      }
      std::stable_sort(kps.begin(), kps.end(), [](const Keypoint& p, const Keypoint& q) {
        return p.response > q.response;
      });
      edges = em.mask;
      break;
    }
    case DetectorKind::Corner: {
      const auto pyr = build_pyramid(img, cfg.family, cfg.ladder, cfg.border);
      CornerConfig cc;
      cc.sigma_i_ratio = cfg.sigma_i_ratio;
      cc.k = cfg.harris_k;
      cc.threshold = cfg.corner_threshold;
      cc.max_count = cfg.max_count;
      cc.max_anisotropy = cfg.max_anisotropy;
      cc.border = cfg.border;
      kps = detect_corners(pyr, cc);
      break;
    }
    case DetectorKind::Blob: {
      const auto pyr = build_pyramid(img, cfg.family, cfg.ladder, cfg.border);
      BlobConfig bc;
      bc.threshold = cfg.blob_threshold;
      bc.max_count = cfg.max_count;
      bc.sigma_i_ratio = cfg.sigma_i_ratio;
      bc.max_anisotropy = cfg.max_anisotropy;
      kps = detect_blobs(pyr, bc);
      break;
    }
  }

  {
    auto file = open_out(cfg.keypoints_out);
    write_keypoints(file, kps,
                    std::string(to_string(cfg.detector)) + " family " + std::string(to_string(cfg.family)));
  }
  if (!cfg.visualization_out.empty()) {
    RgbImage canvas = to_rgb(img, 0.0, std::max(1e-12, max_value(img)));
    if (edges) {
      for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
          if (edges->at(x, y)) canvas.set(x, y, 255, 0, 0);
        }
      }
    } else {
      draw_keypoints(canvas, kps);
    }
    write_png(cfg.visualization_out, canvas);
  }
  out << to_string(cfg.detector) << ' ' << to_string(cfg.family) << ": " << kps.size() << " keypoints -> "
      << cfg.keypoints_out << '\n';
  return 0;
}

// orient ---------------------------------------------------------------------

struct OrientArgs {
  std::string input;
  std::vector<double> angles_deg{17.0, 77.0, 137.0};
  double alpha = 0.32;
  double xi = 1.2;
  int radius = 5;
  std::string prefix = "orient";
};

int cmd_orient(const Global& g, const OrientArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  const ImageGray img = load_input(a.input, g.seed);
  if (a.angles_deg.empty()) throw DomainError("at least one direction is needed");
  std::vector<OrientedParams> params;
  for (double d : a.angles_deg) params.push_back({d * std::numbers::pi / 180.0, a.xi, a.alpha});
  const OrientationMax om = orientation_max(img, params, a.radius, cfg.border);
  double peak = max_value(om.energy);
  if (!(peak > 0.0)) peak = 1.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const ImageGray e = oriented_energy(img, params[i], a.radius, cfg.border);
    std::ostringstream name;
    name << a.prefix << "_" << num(a.angles_deg[i]) << ".png";
    write_png(name.str(), e, 0.0, peak);
    out << "energy " << num(a.angles_deg[i]) << " deg -> " << name.str() << '\n';
  }
  ImageGray idx(img.width(), img.height());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = om.argmax[i];
  const std::string argmax_path = a.prefix + "_argmax.png";
  write_png(argmax_path, idx, 0.0, std::max<double>(1.0, static_cast<double>(params.size() - 1)));
  write_png(a.prefix + "_max.png", om.energy, 0.0, peak);
  out << "argmax -> " << argmax_path << '\n';
  return 0;
}

// evaluate -------------------------------------------------------------------

struct EvaluateArgs {
  std::string input = "synthetic";
  std::vector<std::string> families{"gaussian", "gabor", "haar"};
  std::string sequence;
  bool identity_only = false;
  bool assert_ordering = false;
  std::string report_out;
};

int cmd_evaluate(const Global& g, const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = resolve_config(g);
  if (!a.report_out.empty()) cfg.report_out = a.report_out;
  cfg.validate();
  const ImageGray img = load_input(a.input, g.seed);

  std::vector<ViewPair> seq;
  if (a.identity_only) {
    seq.push_back({"identity", Homography::identity()});
  } else if (!a.sequence.empty()) {
    std::ifstream in(a.sequence);
    if (!in) throw FormatError("cannot open sequence '" + a.sequence + "'");
    seq = read_sequence(in);
  } else {
    seq = viewpoint_sequence(img.width(), img.height());
  }
  std::vector<Family> families;
  for (const auto& f : a.families) families.push_back(parse_family(f));

  DetectorConfig dc;
  dc.ladder = cfg.ladder;
  dc.border = cfg.border;
  dc.overlap_threshold = cfg.overlap_threshold;
  dc.blob.threshold = cfg.blob_threshold;
  dc.blob.max_count = cfg.max_count;
  dc.blob.sigma_i_ratio = cfg.sigma_i_ratio;
  dc.blob.max_anisotropy = cfg.max_anisotropy;
  const auto reports = run_comparison(img, seq, families, dc);
  {
    auto file = open_out(cfg.report_out);
    write_report_csv(file, reports);
  }
  for (const auto& r : reports) {
    out << std::left << std::setw(10) << to_string(r.family) << " mean repeatability " << std::fixed
        << std::setprecision(4) << r.mean() << '\n';
    out.unsetf(std::ios::floatfield);
  }
  out << "report -> " << cfg.report_out << '\n';
  if (a.assert_ordering) {
    std::string why;
    if (!ordering_holds(reports, &why)) {
      err << "ordering check failed: " << why << '\n';
      return 1;
    }
    out << "ordering gaussian >= gabor >= haar holds\n";
  }
  return 0;
}

}  // namespace

void write_keypoints(std::ostream& os, std::span<const Keypoint> kps, const std::string& description) {
  os << "# gaborpd keypoints: " << description << '\n';
  os << "# count " << kps.size() << '\n';
  os << "# x y a b c # sigma response\n";
  for (const Keypoint& k : kps) {
    const Ellipse e = k.ellipse ? *k.ellipse : Ellipse::circle(kRegionScale * k.sigma);
    os << num(k.x) << ' ' << num(k.y) << ' ' << num(e.a) << ' ' << num(e.b) << ' ' << num(e.c) << " # "
       << num(k.sigma) << ' ' << num(k.response) << '\n';
  }
}

std::vector<Keypoint> read_keypoints(std::istream& is) {
  std::vector<Keypoint> kps;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto hash = line.find('#');
    std::istringstream main(line.substr(0, hash));
    Keypoint k;
    Ellipse e;
    if (!(main >> k.x >> k.y >> e.a >> e.b >> e.c)) throw FormatError("malformed keypoint line: " + line);
    k.ellipse = e;
    k.sigma = e.positive_definite() ? e.equivalent_radius() / kRegionScale : 0.0;
    if (hash != std::string::npos) {
      std::istringstream extra(line.substr(hash + 1));
      double s = 0.0, r = 0.0;
      if (extra >> s >> r) {
        k.sigma = s;
        k.response = r;
      }
    }
    kps.push_back(k);
  }
  return kps;
}

std::vector<ViewPair> read_sequence(std::istream& is) {
  std::vector<ViewPair> seq;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string label;
    if (!(ls >> label)) continue;
    seq.push_back({label, read_homography(ls)});
  }
  if (seq.empty()) throw FormatError("sequence file has no homographies");
  return seq;
}

void draw_keypoints(RgbImage& canvas, std::span<const Keypoint> kps) {
  for (std::size_t i = kps.size(); i-- > 0;) {
    const Keypoint& k = kps[i];
    const Ellipse e = k.ellipse ? *k.ellipse : Ellipse::circle(kRegionScale * k.sigma);
    draw_ellipse(canvas, k.x, k.y, e, rank_colour(i, kps.size()));
  }
}

bool ordering_holds(std::span<const RepeatabilityReport> reports, std::string* why) {
  auto find = [&](Family f) -> const RepeatabilityReport* {
    for (const auto& r : reports) {
      if (r.family == f) return &r;
    }
    return nullptr;
  };
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const auto* ga = find(Family::GaussianDerivative);
  const auto* gb = find(Family::Gabor);
  const auto* ha = find(Family::Haar);
  if (!ga || !gb || !ha) return fail("all three families are required");
  const double mg = ga->mean(), mb = gb->mean(), mh = ha->mean();
  std::ostringstream s;
  s << std::setprecision(4) << "means gaussian " << mg << " gabor " << mb << " haar " << mh;
  if (!(mg >= mb)) return fail(s.str() + ": gaussian below gabor");
  if (!(mb >= mh)) return fail(s.str() + ": gabor below haar");
  if (!(mg - mb <= 0.15)) return fail(s.str() + ": gaussian-gabor gap above 0.15");
  const std::size_t n = ha->per_pair.size();
  if (n != gb->per_pair.size() || n != ga->per_pair.size()) return fail("families cover different pairs");
  for (std::size_t i = n >= 2 ? n - 2 : 0; i < n; ++i) {
    const double h = ha->per_pair[i].repeatability;
    if (!(h < gb->per_pair[i].repeatability && h < ga->per_pair[i].repeatability)) {
      return fail(s.str() + ": haar not strictly worst on " + ha->per_pair[i].label);
    }
  }
  if (why) *why = s.str();
  return true;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gabor-wavelet interest point toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--config", g.config, "key = value run configuration file")->check(CLI::ExistingFile);
  app.add_option("--border", g.border, "border mode: reflect, replicate or zero");
  app.add_option("--seed", g.seed, "seed for synthetic inputs")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "fit a Gabor kernel to a derivative of a Gaussian");
  kernel->add_option("--alpha", ka.alpha, "envelope alpha")->capture_default_str();
  kernel->add_option("--fit", ka.fit, "first, second or complex")
      ->check(CLI::IsMember({"first", "second", "complex"}))
      ->capture_default_str();
  kernel->add_option("--sigma-target", ka.sigma_target, "Gaussian sigma of the target (default: matched to alpha)");
  kernel->add_option("-o,--out", ka.out, "kernel text file")->capture_default_str();
  kernel->add_option("--profile", ka.profile, "optional PNG plot of the samples");

  DetectArgs da;
  auto* detect = app.add_subcommand("detect", "detect edges, corners or blobs");
  detect->add_option("input", da.input, "PGM/PNG image, or 'synthetic'")->required();
  detect->add_option("--family", da.family, "gaussian, gabor or haar");
  detect->add_option("--detector", da.detector, "edge, corner or blob");
  detect->add_option("-o,--out", da.keypoints_out, "keypoint file");
  detect->add_option("--vis", da.visualization_out, "visualization PNG");

  OrientArgs oa;
  auto* orient = app.add_subcommand("orient", "oriented Gabor energy and per-pixel best direction");
  orient->add_option("input", oa.input, "PGM/PNG image, or 'synthetic'")->required();
  orient->add_option("--angles", oa.angles_deg, "directions in degrees")->capture_default_str();
  orient->add_option("--alpha", oa.alpha, "envelope alpha")->capture_default_str();
  orient->add_option("--xi", oa.xi, "frequency magnitude (rad/pixel)")->capture_default_str();
  orient->add_option("--radius", oa.radius, "kernel radius in pixels")->capture_default_str();
  orient->add_option("--prefix", oa.prefix, "output path prefix")->capture_default_str();

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "repeatability of Hessian blobs under viewpoint change");
  evaluate->add_option("input", ea.input, "PGM/PNG image, or 'synthetic'")->capture_default_str();
  evaluate->add_option("--families", ea.families, "families to compare")->delimiter(',')->capture_default_str();
  evaluate->add_option("--sequence", ea.sequence, "homography file: label and nine numbers per line");
  evaluate->add_flag("--identity-only", ea.identity_only, "evaluate the identity pair only");
  evaluate->add_flag("--assert-ordering", ea.assert_ordering,
                     "exit 1 unless gaussian >= gabor >= haar (gap <= 0.15, haar worst on the two largest warps)");
  evaluate->add_option("-o,--out", ea.report_out, "CSV report");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (g.threads > 0) omp_set_num_threads(g.threads);
    if (*kernel) return cmd_kernel(ka, out);
    if (*detect) return cmd_detect(g, da, out);
    if (*orient) return cmd_orient(g, oa, out);
    if (*evaluate) return cmd_evaluate(g, ea, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace gaborpd::cli
