#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stegoguard/image.hpp"

namespace stegoguard {

enum class ImageFormat { Png, Bmp };

const char* to_string(ImageFormat format) noexcept;

struct ImageFile {
  ImageFormat format;
  std::vector<std::uint8_t> payload;
};

enum class CodecErrc { DecodeError, UnsupportedFormat, EncodeError };

const char* to_string(CodecErrc code) noexcept;

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  CodecErrc code() const noexcept { return code_; }

 private:
  CodecErrc code_;
};

/// Identifies PNG and BMP by signature. Known lossy or palette-only containers
/// (JPEG, GIF, WebP) raise UnsupportedFormat; anything else is a DecodeError.
ImageFormat sniff_format(std::span<const std::uint8_t> bytes);

/// Decodes an 8-bit-per-channel PNG or an uncompressed 24/32-bit BMP.
PixelImage load_image(std::span<const std::uint8_t> bytes);
PixelImage load_image(const ImageFile& file);

ImageFile save_image(const PixelImage& image, ImageFormat format);

// Format-specific entry points, used by the two functions above.
PixelImage decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const PixelImage& image);
PixelImage decode_bmp(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_bmp(const PixelImage& image);

/// ".png" / ".bmp" (case-insensitive).
std::optional<ImageFormat> format_for_path(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

PixelImage read_image_file(const std::filesystem::path& path);
/// Format is chosen from the extension; unknown extensions raise EncodeError.
void write_image_file(const std::filesystem::path& path, const PixelImage& image);

}  // namespace stegoguard
