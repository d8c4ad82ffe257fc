#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace stegoguard {

enum class Channel : std::uint8_t { R = 0, G = 1, B = 2 };

constexpr char channel_name(Channel c) noexcept {
  constexpr std::array<char, 3> names{'R', 'G', 'B'};
  return names[static_cast<std::size_t>(c)];
}

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  constexpr std::uint8_t& operator[](Channel c) noexcept {
    return c == Channel::R ? r : (c == Channel::G ? g : b);
  }
  constexpr std::uint8_t operator[](Channel c) const noexcept {
    return c == Channel::R ? r : (c == Channel::G ? g : b);
  }

  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major grid of 8-bit RGB pixels. An optional alpha plane rides along
/// untouched so that RGBA sources can be written back verbatim; nothing in
/// the steganographic walk ever reads or writes it.
class PixelImage {
 public:
  PixelImage() = default;

  /// Throws std::invalid_argument when either dimension is zero.
  PixelImage(std::size_t rows, std::size_t cols, Rgb fill = {});
  PixelImage(std::size_t rows, std::size_t cols, std::vector<Rgb> pixels,
             std::optional<std::vector<std::uint8_t>> alpha = std::nullopt);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  Rgb& at(std::size_t row, std::size_t col) { return pixels_[row * cols_ + col]; }
  const Rgb& at(std::size_t row, std::size_t col) const { return pixels_[row * cols_ + col]; }

  Rgb& operator[](std::size_t index) { return pixels_[index]; }
  const Rgb& operator[](std::size_t index) const { return pixels_[index]; }

  std::span<Rgb> pixels() noexcept { return pixels_; }
  std::span<const Rgb> pixels() const noexcept { return pixels_; }

  bool has_alpha() const noexcept { return alpha_.has_value(); }
  const std::optional<std::vector<std::uint8_t>>& alpha() const noexcept { return alpha_; }
  void set_alpha(std::optional<std::vector<std::uint8_t>> alpha);

  friend bool operator==(const PixelImage&, const PixelImage&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rgb> pixels_;
  std::optional<std::vector<std::uint8_t>> alpha_;
};

/// Largest absolute per-channel difference over all pixels. Images must have
/// identical dimensions.
int max_channel_delta(const PixelImage& a, const PixelImage& b);

/// Peak signal-to-noise ratio in dB over the RGB channels (peak 255).
/// Returns +infinity for identical images.
double psnr(const PixelImage& a, const PixelImage& b);

}  // namespace stegoguard
