#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gaborpd/gabor_kernel.hpp"
#include "gaborpd/scale_space.hpp"
#include "gaborpd/separable_conv.hpp"

namespace gaborpd {

enum class DetectorKind { Edge, Corner, Blob };
enum class EdgeMethod { Maxima, ZeroCrossing };

std::string_view to_string(DetectorKind d) noexcept;
DetectorKind parse_detector(std::string_view s);
std::string_view to_string(EdgeMethod m) noexcept;
EdgeMethod parse_edge_method(std::string_view s);

/// Settings shared by the command-line tools. Stored as a flat `key = value`
/// file; '#' starts a comment.
struct RunConfig {
  Family family = Family::Gabor;
  DetectorKind detector = DetectorKind::Blob;
  ScaleLadder ladder{1.6, 1.189207115002721, 10};
  Border border = Border::Reflect;
  double edge_sigma = 2.0;
  EdgeMethod edge_method = EdgeMethod::Maxima;
  double edge_threshold = 0.1;
  double blob_threshold = 0.05;
  double corner_threshold = 0.01;
  double harris_k = 0.04;
  double sigma_i_ratio = 1.4;
  double max_anisotropy = 4.0;
  std::size_t max_count = 1000;
  double overlap_threshold = 0.4;
  std::string keypoints_out = "keypoints.txt";
  std::string visualization_out = "keypoints.png";
  std::string report_out = "report.csv";

  /// Throws DomainError for out-of-range fields.
  void validate() const;
};

/// Keys in serialization order.
const std::vector<std::string_view>& run_config_keys();

/// Throws FormatError for unknown keys or unparsable values.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

RunConfig parse_run_config(std::istream& is);
RunConfig load_run_config(const std::string& path);
/// Every key in fixed order, numbers at round-trip precision.
void write_run_config(std::ostream& os, const RunConfig& cfg);

}  // namespace gaborpd
