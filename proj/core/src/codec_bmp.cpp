#include <cstdint>
#include <limits>

#include "stegoguard/codec.hpp"

namespace stegoguard {
namespace {

constexpr std::size_t kFileHeaderSize = 14;
constexpr std::uint32_t kInfoHeaderSize = 40;
constexpr std::uint32_t kV4HeaderSize = 108;
constexpr std::uint32_t kBiRgb = 0;
constexpr std::uint32_t kBiBitfields = 3;
constexpr std::uint32_t kBiAlphaBitfields = 6;
constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 28;

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16) |
         (std::uint32_t{b[at + 3]} << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

[[noreturn]] void bad(const std::string& what) { throw CodecError(CodecErrc::DecodeError, "BMP: " + what); }

}  // namespace

PixelImage decode_bmp(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFileHeaderSize + kInfoHeaderSize) bad("file too short");
  if (bytes[0] != 'B' || bytes[1] != 'M') bad("missing BM signature");

  const std::uint32_t data_offset = get_u32(bytes, 10);
  const std::uint32_t header_size = get_u32(bytes, 14);
  if (header_size < kInfoHeaderSize)
    throw CodecError(CodecErrc::UnsupportedFormat, "BMP: OS/2 core headers are not supported");
  if (kFileHeaderSize + header_size > bytes.size()) bad("truncated info header");

  const auto width = static_cast<std::int32_t>(get_u32(bytes, 18));
  const auto height = static_cast<std::int32_t>(get_u32(bytes, 22));
  const std::uint16_t planes = get_u16(bytes, 26);
  const std::uint16_t bpp = get_u16(bytes, 28);
  const std::uint32_t compression = get_u32(bytes, 30);

  if (planes != 1) bad("plane count must be 1");
  if (width <= 0 || height == 0 || height == std::numeric_limits<std::int32_t>::min())
    bad("invalid dimensions");
  if (bpp != 24 && bpp != 32)
    throw CodecError(CodecErrc::UnsupportedFormat, "BMP: only 24- and 32-bit images are supported");

  const std::uint64_t cols = static_cast<std::uint64_t>(width);
  const std::uint64_t rows = static_cast<std::uint64_t>(height < 0 ? -std::int64_t{height} : height);
  if (cols * rows > kMaxPixels) bad("image too large");
  const bool top_down = height < 0;

  bool has_alpha = false;
  if (compression == kBiRgb) {
    // The fourth byte of a 32-bit BI_RGB pixel is reserved, not alpha.
  } else if (bpp == 32 && (compression == kBiBitfields || compression == kBiAlphaBitfields)) {
    const std::size_t masks_at = kFileHeaderSize + kInfoHeaderSize;
    const bool alpha_in_header = header_size >= 56 || compression == kBiAlphaBitfields;
    if (masks_at + (alpha_in_header ? 16 : 12) > bytes.size()) bad("truncated colour masks");
    if (get_u32(bytes, masks_at) != 0x00FF0000 || get_u32(bytes, masks_at + 4) != 0x0000FF00 ||
        get_u32(bytes, masks_at + 8) != 0x000000FF)
      throw CodecError(CodecErrc::UnsupportedFormat, "BMP: non-standard channel masks");
    if (alpha_in_header) {
      const std::uint32_t alpha_mask = get_u32(bytes, masks_at + 12);
      if (alpha_mask == 0xFF000000)
        has_alpha = true;
      else if (alpha_mask != 0)
        throw CodecError(CodecErrc::UnsupportedFormat, "BMP: non-standard alpha mask");
    }
  } else {
    throw CodecError(CodecErrc::UnsupportedFormat, "BMP: compressed bitmaps are not supported");
  }

  const std::uint64_t stride = ((bpp * cols + 31) / 32) * 4;
  if (data_offset < kFileHeaderSize + header_size) bad("pixel data overlaps headers");
  if (data_offset > bytes.size() || stride * rows > bytes.size() - data_offset) bad("truncated pixel data");

  const std::size_t step = bpp / 8;
  std::vector<Rgb> pixels(static_cast<std::size_t>(rows * cols));
  std::optional<std::vector<std::uint8_t>> alpha;
  if (has_alpha) alpha.emplace(pixels.size());
  for (std::uint64_t y = 0; y < rows; ++y) {
    const std::uint64_t file_row = top_down ? y : rows - 1 - y;
    const std::size_t row_at = data_offset + static_cast<std::size_t>(file_row * stride);
    for (std::uint64_t x = 0; x < cols; ++x) {
      const std::size_t at = row_at + static_cast<std::size_t>(x) * step;
      const std::size_t idx = static_cast<std::size_t>(y * cols + x);
      pixels[idx] = Rgb{bytes[at + 2], bytes[at + 1], bytes[at]};
      if (alpha) (*alpha)[idx] = bytes[at + 3];
    }
  }
  return PixelImage(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(pixels),
                    std::move(alpha));
}

std::vector<std::uint8_t> encode_bmp(const PixelImage& image) {
  if (image.empty()) throw CodecError(CodecErrc::EncodeError, "cannot encode an empty image");
  const bool with_alpha = image.has_alpha();
  const std::uint32_t bpp = with_alpha ? 32 : 24;
  const std::uint32_t header_size = with_alpha ? kV4HeaderSize : kInfoHeaderSize;
  constexpr std::uint64_t kMaxDim = std::numeric_limits<std::int32_t>::max();
  if (image.cols() > kMaxDim || image.rows() > kMaxDim)
    throw CodecError(CodecErrc::EncodeError, "image dimensions exceed BMP limits");

  const std::uint64_t stride = ((bpp * std::uint64_t{image.cols()} + 31) / 32) * 4;
  const std::uint64_t data_size = stride * image.rows();
  const std::uint64_t data_offset = kFileHeaderSize + header_size;
  const std::uint64_t file_size = data_offset + data_size;
  if (file_size > std::numeric_limits<std::uint32_t>::max())
    throw CodecError(CodecErrc::EncodeError, "image too large for BMP");

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(file_size));
  out.push_back('B');
  out.push_back('M');
  put_u32(out, static_cast<std::uint32_t>(file_size));
  put_u32(out, 0);
  put_u32(out, static_cast<std::uint32_t>(data_offset));

  put_u32(out, header_size);
  put_u32(out, static_cast<std::uint32_t>(image.cols()));
  put_u32(out, static_cast<std::uint32_t>(image.rows()));  // positive: bottom-up rows
  put_u16(out, 1);
  put_u16(out, static_cast<std::uint16_t>(bpp));
  put_u32(out, with_alpha ? kBiBitfields : kBiRgb);
  put_u32(out, static_cast<std::uint32_t>(data_size));
  put_u32(out, 2835);  // 72 dpi
  put_u32(out, 2835);
  put_u32(out, 0);
  put_u32(out, 0);
  if (with_alpha) {
    put_u32(out, 0x00FF0000);
    put_u32(out, 0x0000FF00);
    put_u32(out, 0x000000FF);
    put_u32(out, 0xFF000000);
    put_u32(out, 0x73524742);  // 'sRGB'
    out.insert(out.end(), 36 + 12, 0);  // endpoints + gamma, unused for sRGB
  }

  const std::size_t pad = static_cast<std::size_t>(stride - image.cols() * (bpp / 8));
  for (std::size_t y = image.rows(); y-- > 0;) {
    for (std::size_t x = 0; x < image.cols(); ++x) {
      const Rgb& px = image.at(y, x);
      out.push_back(px.b);
      out.push_back(px.g);
      out.push_back(px.r);
      if (with_alpha) out.push_back((*image.alpha())[y * image.cols() + x]);
    }
    out.insert(out.end(), pad, 0);
  }
  return out;
}

}  // namespace stegoguard
