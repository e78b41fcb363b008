#include "gaborpd/separable_conv.hpp"

#include "conv_checks.hpp"

namespace gaborpd::reference {

ImageGray conv_rows(const ImageGray& img, KernelView k, Border border) {
  detail::check_kernel(img, k);
  const int w = img.width();
  const int n = static_cast<int>(k.taps.size());
  ImageGray out(w, img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const int src = border_index(x + k.center - j, w, border);
        const double v = src < 0 ? 0.0 : img.at(src, y);
        sum += k.taps[j] * v;
      }
      out.at(x, y) = sum;
    }
  }
  return out;
}

ImageGray conv_cols(const ImageGray& img, KernelView k, Border border) {
  detail::check_kernel(img, k);
  const int h = img.height();
  const int n = static_cast<int>(k.taps.size());
  ImageGray out(img.width(), h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const int src = border_index(y + k.center - j, h, border);
        const double v = src < 0 ? 0.0 : img.at(x, src);
        sum += k.taps[j] * v;
      }
      out.at(x, y) = sum;
    }
  }
  return out;
}

ImageGray conv_separable(const ImageGray& img, KernelView k_row, KernelView k_col, Border border) {
  return reference::conv_cols(reference::conv_rows(img, k_row, border), k_col, border);
}

}  // namespace gaborpd::reference
