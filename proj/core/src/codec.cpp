#include "stegoguard/codec.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

namespace stegoguard {
namespace {

bool starts_with(std::span<const std::uint8_t> bytes, std::initializer_list<std::uint8_t> prefix) {
  return bytes.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), bytes.begin());
}

}  // namespace

const char* to_string(ImageFormat format) noexcept {
  return format == ImageFormat::Png ? "png" : "bmp";
}

const char* to_string(CodecErrc code) noexcept {
  switch (code) {
    case CodecErrc::DecodeError: return "DecodeError";
    case CodecErrc::UnsupportedFormat: return "UnsupportedFormat";
    case CodecErrc::EncodeError: return "EncodeError";
  }
  return "Unknown";
}

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) {
  if (starts_with(bytes, {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A})) return ImageFormat::Png;
  if (starts_with(bytes, {'B', 'M'})) return ImageFormat::Bmp;
  if (starts_with(bytes, {0xFF, 0xD8, 0xFF}))
    throw CodecError(CodecErrc::UnsupportedFormat, "JPEG is lossy; embedded bits cannot survive it");
  if (starts_with(bytes, {'G', 'I', 'F', '8'}))
    throw CodecError(CodecErrc::UnsupportedFormat, "GIF is palette-indexed");
  if (bytes.size() >= 12 && starts_with(bytes, {'R', 'I', 'F', 'F'}) &&
      std::equal(bytes.begin() + 8, bytes.begin() + 12, "WEBP"))
    throw CodecError(CodecErrc::UnsupportedFormat, "WebP is not supported");
  throw CodecError(CodecErrc::DecodeError, "unrecognised image signature");
}

PixelImage load_image(std::span<const std::uint8_t> bytes) {
  return sniff_format(bytes) == ImageFormat::Png ? decode_png(bytes) : decode_bmp(bytes);
}

PixelImage load_image(const ImageFile& file) {
  if (sniff_format(file.payload) != file.format)
    throw CodecError(CodecErrc::DecodeError, "payload does not match declared format");
  return load_image(std::span<const std::uint8_t>(file.payload));
}

ImageFile save_image(const PixelImage& image, ImageFormat format) {
  if (image.empty()) throw CodecError(CodecErrc::EncodeError, "cannot encode an empty image");
  return ImageFile{format, format == ImageFormat::Png ? encode_png(image) : encode_bmp(image)};
}

std::optional<ImageFormat> format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return ImageFormat::Png;
  if (ext == ".bmp") return ImageFormat::Bmp;
  return std::nullopt;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

PixelImage read_image_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return load_image(std::span<const std::uint8_t>(bytes));
}

void write_image_file(const std::filesystem::path& path, const PixelImage& image) {
  const auto format = format_for_path(path);
  if (!format) throw CodecError(CodecErrc::EncodeError, "unknown image extension: " + path.string());
  const auto file = save_image(image, *format);
  write_file_bytes(path, file.payload);
}

}  // namespace stegoguard
