#include "stegoguard/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace stegoguard {

PixelImage::PixelImage(std::size_t rows, std::size_t cols, Rgb fill)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("PixelImage: zero dimension");
  pixels_.assign(rows * cols, fill);
}

PixelImage::PixelImage(std::size_t rows, std::size_t cols, std::vector<Rgb> pixels,
                       std::optional<std::vector<std::uint8_t>> alpha)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("PixelImage: zero dimension");
  if (pixels_.size() != rows * cols)
    throw std::invalid_argument("PixelImage: pixel count does not match rows*cols");
  set_alpha(std::move(alpha));
}

void PixelImage::set_alpha(std::optional<std::vector<std::uint8_t>> alpha) {
  if (alpha && alpha->size() != pixels_.size())
    throw std::invalid_argument("PixelImage: alpha plane size mismatch");
  alpha_ = std::move(alpha);
}

int max_channel_delta(const PixelImage& a, const PixelImage& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_channel_delta: dimension mismatch");
  int worst = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    for (Channel c : {Channel::R, Channel::G, Channel::B}) {
      worst = std::max(worst, std::abs(int{a[i][c]} - int{b[i][c]}));
    }
  }
  return worst;
}

double psnr(const PixelImage& a, const PixelImage& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("psnr: dimension mismatch");
  if (a.empty()) throw std::invalid_argument("psnr: empty image");
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    for (Channel c : {Channel::R, Channel::G, Channel::B}) {
      const double d = static_cast<double>(a[i][c]) - static_cast<double>(b[i][c]);
      sum_sq += d * d;
    }
  }
  if (sum_sq == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sum_sq / (3.0 * static_cast<double>(a.pixel_count()));
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace stegoguard
