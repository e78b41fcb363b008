#pragma once

#include <cstdint>
#include <vector>

#include "gaborpd/eval_harness.hpp"
#include "gaborpd/image.hpp"
#include "gaborpd/separable_conv.hpp"

// Test scenes with known geometry. Pixel x covers [x - 0.5, x + 0.5]; shapes
// are anti-aliased by exact area coverage where that is cheap.

namespace gaborpd {

/// Unit-sum Gaussian smoothing.
ImageGray gaussian_blur(const ImageGray& img, double sigma, Border border = Border::Reflect);

/// Vertical step at real position edge_x (lo to the left, hi to the right).
ImageGray step_edge(int width, int height, double edge_x, double lo = 0.0, double hi = 1.0);

/// Axis-aligned square with corners (x0, y0) and (x0 + side, y0 + side).
ImageGray square(int width, int height, double x0, double y0, double side, double lo = 0.0, double hi = 1.0);

/// bg + amplitude * exp(-((x-cx)^2 + (y-cy)^2) / r^2). The normalized Hessian
/// peaks at sigma = r / sqrt(2).
ImageGray gaussian_blob(int width, int height, double cx, double cy, double r, double amplitude = 1.0,
                        double bg = 0.0);

/// 0.5 + 0.5 cos(omega (x cos(theta) + y sin(theta)) + phase).
ImageGray grating(int width, int height, double theta, double omega, double phase = 0.0);

ImageGray checkerboard(int width, int height, int cell, double lo = 0.0, double hi = 1.0);

/// Seeded white noise blurred at `sigma`, rescaled to [0, 1].
ImageGray random_smooth(int width, int height, double sigma, std::uint64_t seed);

/// Checkerboard patch, Gaussian blobs of several radii and text-like strokes
/// on a mid-grey background; 4x4 supersampled, then blurred at sigma 0.8.
ImageGray structured_scene(int width = 320, int height = 240, std::uint64_t seed = 7);

/// Rotations of the scene plane by 20, 30, 40, 50 and 60 degrees about the
/// vertical axis through the centre, focal length = width.
std::vector<ViewPair> viewpoint_sequence(int width, int height);

}  // namespace gaborpd
