#include <csetjmp>
#include <cstring>
#include <limits>
#include <memory>

#include <png.h>

#include "stegoguard/codec.hpp"

namespace stegoguard {
namespace {

// Everything libpng may touch between setjmp and longjmp lives on the heap so
// that no automatic object of decode_png changes after setjmp.
struct ReadState {
  std::span<const std::uint8_t> input;
  std::size_t offset = 0;
  std::string error;
  std::vector<std::uint8_t> buffer;
  std::vector<png_bytep> row_pointers;
};

void on_error(png_structp png, png_const_charp message) {
  auto* state = static_cast<ReadState*>(png_get_error_ptr(png));
  if (state) state->error = message ? message : "libpng error";
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

void read_from_span(png_structp png, png_bytep out, png_size_t length) {
  auto* state = static_cast<ReadState*>(png_get_io_ptr(png));
  if (state->input.size() - state->offset < length) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, state->input.data() + state->offset, length);
  state->offset += length;
}

struct ReadHandles {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadHandles() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

}  // namespace

PixelImage decode_png(std::span<const std::uint8_t> bytes) {
  auto state = std::make_unique<ReadState>();
  state->input = bytes;

  ReadHandles handles;
  handles.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, state.get(), on_error, on_warning);
  if (!handles.png) throw CodecError(CodecErrc::DecodeError, "png_create_read_struct failed");
  handles.info = png_create_info_struct(handles.png);
  if (!handles.info) throw CodecError(CodecErrc::DecodeError, "png_create_info_struct failed");

  if (setjmp(png_jmpbuf(handles.png))) {
    throw CodecError(CodecErrc::DecodeError, "PNG decode failed: " + state->error);
  }

  png_set_read_fn(handles.png, state.get(), read_from_span);
  png_read_info(handles.png, handles.info);

  const png_uint_32 width = png_get_image_width(handles.png, handles.info);
  const png_uint_32 height = png_get_image_height(handles.png, handles.info);
  const int bit_depth = png_get_bit_depth(handles.png, handles.info);
  const int color_type = png_get_color_type(handles.png, handles.info);

  if (bit_depth != 8)
    throw CodecError(CodecErrc::UnsupportedFormat, "only 8-bit PNG channels are supported");
  if (color_type == PNG_COLOR_TYPE_PALETTE)
    throw CodecError(CodecErrc::UnsupportedFormat, "palette-indexed PNG is not supported");

  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(handles.png);
  if (png_get_valid(handles.png, handles.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(handles.png);
  png_set_interlace_handling(handles.png);
  png_read_update_info(handles.png, handles.info);

  const int channels = png_get_channels(handles.png, handles.info);
  if (channels != 3 && channels != 4)
    throw CodecError(CodecErrc::UnsupportedFormat, "unexpected PNG channel layout");
  const std::size_t row_bytes = png_get_rowbytes(handles.png, handles.info);

  state->buffer.resize(row_bytes * height);
  state->row_pointers.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) state->row_pointers[y] = state->buffer.data() + y * row_bytes;
  png_read_image(handles.png, state->row_pointers.data());
  png_read_end(handles.png, nullptr);

  std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
  std::optional<std::vector<std::uint8_t>> alpha;
  if (channels == 4) alpha.emplace(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const std::uint8_t* src = state->buffer.data() + (i / width) * row_bytes + (i % width) * channels;
    pixels[i] = Rgb{src[0], src[1], src[2]};
    if (alpha) (*alpha)[i] = src[3];
  }
  return PixelImage(height, width, std::move(pixels), std::move(alpha));
}

std::vector<std::uint8_t> encode_png(const PixelImage& image) {
  if (image.empty()) throw CodecError(CodecErrc::EncodeError, "cannot encode an empty image");
  constexpr std::size_t kMaxDim = 0x7FFFFFFF;
  if (image.cols() > kMaxDim || image.rows() > kMaxDim)
    throw CodecError(CodecErrc::EncodeError, "image dimensions exceed PNG limits");

  const bool with_alpha = image.has_alpha();
  const std::size_t channels = with_alpha ? 4 : 3;
  std::vector<std::uint8_t> interleaved(image.pixel_count() * channels);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    std::uint8_t* dst = interleaved.data() + i * channels;
    dst[0] = image[i].r;
    dst[1] = image[i].g;
    dst[2] = image[i].b;
    if (with_alpha) dst[3] = (*image.alpha())[i];
  }

  png_image desc;
  std::memset(&desc, 0, sizeof desc);
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(image.cols());
  desc.height = static_cast<png_uint_32>(image.rows());
  desc.format = with_alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;

  const auto stride = static_cast<png_int_32>(image.cols() * channels);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, interleaved.data(), stride, nullptr)) {
    std::string message = desc.message;
    png_image_free(&desc);
    throw CodecError(CodecErrc::EncodeError, "PNG encode failed: " + message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, interleaved.data(), stride, nullptr)) {
    std::string message = desc.message;
    png_image_free(&desc);
    throw CodecError(CodecErrc::EncodeError, "PNG encode failed: " + message);
  }
  out.resize(size);
  return out;
}

}  // namespace stegoguard
