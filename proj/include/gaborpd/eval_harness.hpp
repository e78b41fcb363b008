#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gaborpd/detectors.hpp"
#include "gaborpd/homography.hpp"
#include "gaborpd/image.hpp"
#include "gaborpd/scale_space.hpp"

namespace gaborpd {

/// Inverse-mapping bilinear warp: out(p) = img(H^-1 p). Output has the input size
/// unless dimensions are given.
ImageGray warp_image(const ImageGray& img, const Homography& H, Border border = Border::Reflect, int out_width = -1,
                     int out_height = -1);

/// Maps centres projectively and ellipses through the local Jacobian J
/// (A' = J^-T A J^-1); sigma follows the ellipse area. Keypoints without an
/// ellipse are treated as circles of radius kRegionScale * sigma.
std::vector<Keypoint> project_keypoints(std::span<const Keypoint> kps, const Homography& H);

/// 1 - |E1 n E2| / |E1 u E2| by clipping 128-gon approximations of both
/// ellipses (relative area error below 1e-3).
double overlap_error(const Keypoint& k1, const Keypoint& k2);

/// Image extents used to decide which detections are co-visible.
struct SharedRegion {
  int width_a = 0;
  int height_a = 0;
  int width_b = 0;
  int height_b = 0;
};

struct RepeatabilityResult {
  int detections_a = 0;  // inside the shared region
  int detections_b = 0;
  int correspondences = 0;
  double score = 0.0;
};

/// Radius both regions are rescaled to (about their own centres) before the
/// overlap test.
inline constexpr double kNormalizedRegionRadius = 30.0;

/// A's keypoints are projected into B with H. Pairs are matched one-to-one,
/// greedily by ascending overlap error; pairs with error <= overlap_threshold
/// are correspondences. Score = correspondences / min(shared counts).
RepeatabilityResult repeatability(std::span<const Keypoint> kps_a, std::span<const Keypoint> kps_b,
                                  const Homography& H, double overlap_threshold, const SharedRegion& shared);

struct ViewPair {
  std::string label;
  Homography H;  // reference -> view
};

struct DetectorConfig {
  ScaleLadder ladder{1.6, 1.189207115002721, 10};
  BlobConfig blob{};
  Border border = Border::Reflect;
  double overlap_threshold = 0.4;
};

struct PairResult {
  std::string label;
  int detections_a = 0;
  int detections_b = 0;
  int correspondences = 0;
  double repeatability = 0.0;
};

struct RepeatabilityReport {
  Family family = Family::GaussianDerivative;
  std::vector<PairResult> per_pair;

  double mean() const noexcept;
};

/// Hessian blob detection on the reference and each warped view, per family.
std::vector<RepeatabilityReport> run_comparison(const ImageGray& img, std::span<const ViewPair> sequence,
                                                std::span<const Family> families, const DetectorConfig& config);

/// `family,pair,detections_a,detections_b,correspondences,repeatability`
void write_report_csv(std::ostream& os, std::span<const RepeatabilityReport> reports);

}  // namespace gaborpd
