#pragma once

// Message-driven image steganography.
//
// A message is split into 2-bit groups; the resulting base-4 digit string
// (the embedding sequence) selects, pixel by pixel, whether the pixel is
// skipped (digit 0) or which channel acts as the indicator (1=R, 2=G, 3=B).
// Of the two remaining channels the lower one carries payload bits in its
// low bits and the other one signals the bit count (1 or 2) in its LSB.
// The stego key is the embedding sequence read as a base-4 integer times the
// pixel count; its binary expansion is the rate sequence that decides how
// many bits each pixel carries.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stegoguard/image.hpp"

namespace stegoguard {

using BigInt = boost::multiprecision::cpp_int;

enum class StegoErrc {
  InvalidMessage,
  InvalidSequence,
  NonPrintableResult,
  DegenerateKey,
  InvalidKey,
  PixelUnusable,
  TamperError,
  CapacityError,
  InvalidLength,
};

const char* to_string(StegoErrc code) noexcept;

class StegoError : public std::runtime_error {
 public:
  StegoError(StegoErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  StegoErrc code() const noexcept { return code_; }

 private:
  StegoErrc code_;
};

/// Printable-ASCII (0x20..0x7E), non-empty byte string.
class SecretMessage {
 public:
  /// Throws StegoError(InvalidMessage).
  explicit SecretMessage(std::string_view text);

  const std::string& text() const noexcept { return text_; }
  std::size_t size() const noexcept { return text_.size(); }
  std::size_t bit_count() const noexcept { return text_.size() * 8; }

  friend bool operator==(const SecretMessage&, const SecretMessage&) = default;

 private:
  std::string text_;
};

bool is_printable(std::string_view text) noexcept;

/// Base-4 digits, four per message byte, most significant pair first.
class EmbeddingSequence {
 public:
  /// Throws StegoError(InvalidSequence) unless the length is a positive
  /// multiple of 4 and every digit is in 0..3.
  explicit EmbeddingSequence(std::vector<std::uint8_t> digits);

  std::span<const std::uint8_t> digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return digits_[i]; }
  std::size_t message_length() const noexcept { return digits_.size() / 4; }

  friend bool operator==(const EmbeddingSequence&, const EmbeddingSequence&) = default;

 private:
  std::vector<std::uint8_t> digits_;
};

class StegoKey {
 public:
  /// Throws StegoError(InvalidKey) when value <= 0.
  explicit StegoKey(BigInt value);

  /// Parses a plain decimal string. Throws StegoError(InvalidKey).
  static StegoKey from_decimal(std::string_view text);

  const BigInt& value() const noexcept { return value_; }
  std::string to_decimal() const;

  friend bool operator==(const StegoKey&, const StegoKey&) = default;

 private:
  BigInt value_;
};

/// Binary expansion of a stego key, most significant bit first.
class RateSequence {
 public:
  explicit RateSequence(std::vector<std::uint8_t> bits);

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  std::string to_string() const;

 private:
  std::vector<std::uint8_t> bits_;
};

struct ChannelAssignment {
  Channel indicator;
  Channel data;
  Channel third;

  friend constexpr bool operator==(const ChannelAssignment&, const ChannelAssignment&) = default;
};

EmbeddingSequence encode_message(const SecretMessage& message);

/// Throws InvalidSequence for a length that is not a multiple of 4 (or a digit
/// above 3) and NonPrintableResult when a decoded byte is outside 0x20..0x7E.
SecretMessage decode_digits(std::span<const std::uint8_t> digits);

/// The sequence read as a base-4 number.
BigInt sequence_value(const EmbeddingSequence& sequence);

StegoKey derive_stego_key(const EmbeddingSequence& sequence, std::size_t rows, std::size_t cols);

/// Divides the key by rows*cols and left-pads the base-4 quotient to whole
/// bytes. Throws InvalidKey when the key is not an exact multiple.
EmbeddingSequence recover_embedding_sequence(const StegoKey& key, std::size_t rows, std::size_t cols);

RateSequence derive_rate_sequence(const StegoKey& key);

/// std::nullopt means the pixel is skipped (digit 0).
std::optional<ChannelAssignment> assign_channels(const Rgb& pixel, std::uint8_t digit);

/// Writes `payload_bits` (MSB first, one bit per element, exactly rate_bit+1
/// of them) into the low bits of the data channel, signals the count in the
/// third channel's LSB and restores data < third. Throws PixelUnusable.
Rgb embed_pixel(const Rgb& pixel, const ChannelAssignment& assignment, std::uint8_t rate_bit,
                std::span<const std::uint8_t> payload_bits);

/// Inverse of embed_pixel. Throws TamperError when the third-channel signal
/// disagrees with `expected_rate_bit`.
std::vector<std::uint8_t> read_pixel(const Rgb& pixel, const ChannelAssignment& assignment,
                                     std::uint8_t expected_rate_bit);

/// One carrying pixel in the walk shared by embed and extract.
struct WalkStep {
  std::size_t pixel_index;
  std::uint8_t digit;
  std::uint8_t rate_bit;
  std::size_t first_bit;     // offset of this pixel's payload in the message bit stream
  std::size_t payload_bits;  // bits that belong to the message (<= rate_bit + 1)
};

/// Pixel i takes digit sequence[i mod |sequence|] and rate bit
/// rates[i mod |rates|]; the walk stops once `bit_count` bits are placed.
/// Throws CapacityError when the image runs out first.
std::vector<WalkStep> plan_walk(const EmbeddingSequence& sequence, const RateSequence& rates,
                                std::size_t pixel_count, std::size_t bit_count);

struct EmbedResult {
  PixelImage stego;
  StegoKey key;
};

EmbedResult embed(const PixelImage& cover, const SecretMessage& message);

SecretMessage extract(const PixelImage& stego, const StegoKey& key);

/// Brute-force pattern count for a key of `key_length_digits` positions:
/// 2 * 3^(n - 2). Throws StegoError(InvalidLength) for n < 2.
BigInt keyspace_size(int key_length_digits);

}  // namespace stegoguard
