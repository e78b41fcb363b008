#pragma once

#include <algorithm>
#include <string>

#include "gaborpd/errors.hpp"
#include "gaborpd/separable_conv.hpp"

namespace gaborpd::detail {

inline void check_kernel(const ImageGray& img, KernelView k) {
  if (img.empty()) throw SizeError("empty image");
  const auto n = static_cast<long>(k.taps.size());
  if (n == 0) throw SizeError("empty kernel");
  if (k.center < 0 || k.center >= n) throw SizeError("kernel center outside the tap range");
  const long limit = 2L * std::min(img.width(), img.height()) + 1;
  if (n > limit) {
    throw SizeError("kernel of " + std::to_string(n) + " taps exceeds 2*min(width,height)+1 = " +
                    std::to_string(limit));
  }
}

}  // namespace gaborpd::detail
