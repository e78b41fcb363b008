#include "gaborpd/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "gaborpd/errors.hpp"

namespace gaborpd {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out)) {
    throw FormatError("bad number for '" + std::string(key) + "': '" + std::string(v) + "'");
  }
  return out;
}

long long to_integer(std::string_view key, std::string_view v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw FormatError("bad integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? p : buf);
}

}  // namespace

std::string_view to_string(DetectorKind d) noexcept {
  switch (d) {
    case DetectorKind::Edge: return "edge";
    case DetectorKind::Corner: return "corner";
    case DetectorKind::Blob: return "blob";
  }
  return "?";
}

DetectorKind parse_detector(std::string_view s) {
  if (s == "edge") return DetectorKind::Edge;
  if (s == "corner") return DetectorKind::Corner;
  if (s == "blob") return DetectorKind::Blob;
  throw FormatError("unknown detector '" + std::string(s) + "'");
}

std::string_view to_string(EdgeMethod m) noexcept {
  return m == EdgeMethod::Maxima ? "maxima" : "zero_crossing";
}

EdgeMethod parse_edge_method(std::string_view s) {
  if (s == "maxima") return EdgeMethod::Maxima;
  if (s == "zero_crossing") return EdgeMethod::ZeroCrossing;
  throw FormatError("unknown edge method '" + std::string(s) + "'");
}

void RunConfig::validate() const {
  ladder.validate();
  if (!(edge_sigma >= 0.5)) throw DomainError("edge_sigma must be >= 0.5");
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
  };
  fraction(edge_threshold, "edge_threshold");
  fraction(blob_threshold, "blob_threshold");
  fraction(corner_threshold, "corner_threshold");
  if (!(harris_k > 0.0 && harris_k < 0.25)) throw DomainError("harris_k must lie in (0, 0.25)");
  if (!(sigma_i_ratio > 0.0)) throw DomainError("sigma_i_ratio must be positive");
  if (!(max_anisotropy >= 1.0)) throw DomainError("max_anisotropy must be >= 1");
  if (max_count == 0) throw DomainError("max_count must be positive");
  if (!(overlap_threshold > 0.0 && overlap_threshold < 1.0)) {
    throw DomainError("overlap_threshold must lie in (0, 1)");
  }
}

const std::vector<std::string_view>& run_config_keys() {
  static const std::vector<std::string_view> keys = {
      "family",         "detector",        "sigma0",           "ratio",         "levels",
      "border",         "edge_sigma",      "edge_method",      "edge_threshold", "blob_threshold",
      "corner_threshold", "harris_k",      "sigma_i_ratio",    "max_anisotropy", "max_count",
      "overlap_threshold", "keypoints_out", "visualization_out", "report_out"};
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view v) {
  try {
    if (key == "family") cfg.family = parse_family(v);
    else if (key == "detector") cfg.detector = parse_detector(v);
    else if (key == "sigma0") cfg.ladder.sigma0 = to_double(key, v);
    else if (key == "ratio") cfg.ladder.ratio = to_double(key, v);
    else if (key == "levels") cfg.ladder.levels = static_cast<int>(to_integer(key, v));
    else if (key == "border") cfg.border = parse_border(v);
    else if (key == "edge_sigma") cfg.edge_sigma = to_double(key, v);
    else if (key == "edge_method") cfg.edge_method = parse_edge_method(v);
    else if (key == "edge_threshold") cfg.edge_threshold = to_double(key, v);
    else if (key == "blob_threshold") cfg.blob_threshold = to_double(key, v);
    else if (key == "corner_threshold") cfg.corner_threshold = to_double(key, v);
    else if (key == "harris_k") cfg.harris_k = to_double(key, v);
    else if (key == "sigma_i_ratio") cfg.sigma_i_ratio = to_double(key, v);
    else if (key == "max_anisotropy") cfg.max_anisotropy = to_double(key, v);
    else if (key == "max_count") {
      const long long n = to_integer(key, v);
      if (n <= 0) throw FormatError("max_count must be positive");
      cfg.max_count = static_cast<std::size_t>(n);
    } else if (key == "overlap_threshold") cfg.overlap_threshold = to_double(key, v);
    else if (key == "keypoints_out") cfg.keypoints_out = std::string(v);
    else if (key == "visualization_out") cfg.visualization_out = std::string(v);
    else if (key == "report_out") cfg.report_out = std::string(v);
    else throw FormatError("unknown config key '" + std::string(key) + "'");
  } catch (const DomainError& e) {
    // Enum parsers report bad names as domain errors; in a file that is a format problem.
    throw FormatError(e.what());
  }
}

RunConfig parse_run_config(std::istream& is) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config '" + path + "'");
  return parse_run_config(in);
}

void write_run_config(std::ostream& os, const RunConfig& cfg) {
  os << "family = " << to_string(cfg.family) << '\n'
     << "detector = " << to_string(cfg.detector) << '\n'
     << "sigma0 = " << fmt(cfg.ladder.sigma0) << '\n'
     << "ratio = " << fmt(cfg.ladder.ratio) << '\n'
     << "levels = " << cfg.ladder.levels << '\n'
     << "border = " << to_string(cfg.border) << '\n'
     << "edge_sigma = " << fmt(cfg.edge_sigma) << '\n'
     << "edge_method = " << to_string(cfg.edge_method) << '\n'
     << "edge_threshold = " << fmt(cfg.edge_threshold) << '\n'
     << "blob_threshold = " << fmt(cfg.blob_threshold) << '\n'
     << "corner_threshold = " << fmt(cfg.corner_threshold) << '\n'
     << "harris_k = " << fmt(cfg.harris_k) << '\n'
     << "sigma_i_ratio = " << fmt(cfg.sigma_i_ratio) << '\n'
     << "max_anisotropy = " << fmt(cfg.max_anisotropy) << '\n'
     << "max_count = " << cfg.max_count << '\n'
     << "overlap_threshold = " << fmt(cfg.overlap_threshold) << '\n'
     << "keypoints_out = " << cfg.keypoints_out << '\n'
     << "visualization_out = " << cfg.visualization_out << '\n'
     << "report_out = " << cfg.report_out << '\n';
}

}  // namespace gaborpd
