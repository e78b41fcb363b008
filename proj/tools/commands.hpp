#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gaborpd/detectors.hpp"
#include "gaborpd/eval_harness.hpp"
#include "gaborpd/image_io.hpp"

namespace gaborpd::cli {

/// Parses `args` (without the program name) and runs one subcommand.
/// Returns the process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `x y a b c # sigma response` per keypoint after a '#' header.
void write_keypoints(std::ostream& os, std::span<const Keypoint> kps, const std::string& description);
std::vector<Keypoint> read_keypoints(std::istream& is);

/// One `label h00 h01 ... h22` record per line; '#' starts a comment.
std::vector<ViewPair> read_sequence(std::istream& is);

/// Ellipses at 1-px stroke, coloured by rank (strongest red, weakest blue).
void draw_keypoints(RgbImage& canvas, std::span<const Keypoint> kps);

/// True when mean(gaussian) >= mean(gabor) >= mean(haar), the gaussian-gabor
/// gap is at most 0.15, and haar is strictly below gabor on the last two pairs.
bool ordering_holds(std::span<const RepeatabilityReport> reports, std::string* why = nullptr);

}  // namespace gaborpd::cli
