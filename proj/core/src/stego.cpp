#include "stegoguard/stego.hpp"

#include <algorithm>

namespace stegoguard {
namespace {

// Decimal keys longer than this are rejected outright; they would describe
// messages of several kilobytes, far beyond any image we verify.
constexpr std::size_t kMaxKeyDecimalDigits = 10000;

[[noreturn]] void fail(StegoErrc code, const std::string& what) { throw StegoError(code, what); }

constexpr std::uint8_t byte_from_digits(std::span<const std::uint8_t> four) noexcept {
  return static_cast<std::uint8_t>((four[0] << 6) | (four[1] << 4) | (four[2] << 2) | four[3]);
}

BigInt pixel_count_of(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) fail(StegoErrc::InvalidKey, "image has no pixels");
  return BigInt(rows) * BigInt(cols);
}

}  // namespace

const char* to_string(StegoErrc code) noexcept {
  switch (code) {
    case StegoErrc::InvalidMessage: return "InvalidMessage";
    case StegoErrc::InvalidSequence: return "InvalidSequence";
    case StegoErrc::NonPrintableResult: return "NonPrintableResult";
    case StegoErrc::DegenerateKey: return "DegenerateKey";
    case StegoErrc::InvalidKey: return "InvalidKey";
    case StegoErrc::PixelUnusable: return "PixelUnusable";
    case StegoErrc::TamperError: return "TamperError";
    case StegoErrc::CapacityError: return "CapacityError";
    case StegoErrc::InvalidLength: return "InvalidLength";
  }
  return "Unknown";
}

bool is_printable(std::string_view text) noexcept {
  return std::all_of(text.begin(), text.end(), [](char ch) {
    const auto b = static_cast<unsigned char>(ch);
    return b >= 0x20 && b <= 0x7E;
  });
}

SecretMessage::SecretMessage(std::string_view text) : text_(text) {
  if (text_.empty()) fail(StegoErrc::InvalidMessage, "message is empty");
  if (!is_printable(text_)) fail(StegoErrc::InvalidMessage, "message contains non-printable bytes");
}

EmbeddingSequence::EmbeddingSequence(std::vector<std::uint8_t> digits) : digits_(std::move(digits)) {
  if (digits_.empty() || digits_.size() % 4 != 0)
    fail(StegoErrc::InvalidSequence, "embedding sequence length must be a positive multiple of 4");
  if (std::any_of(digits_.begin(), digits_.end(), [](std::uint8_t d) { return d > 3; }))
    fail(StegoErrc::InvalidSequence, "embedding sequence digit out of range 0..3");
}

StegoKey::StegoKey(BigInt value) : value_(std::move(value)) {
  if (value_ <= 0) fail(StegoErrc::InvalidKey, "stego key must be positive");
}

StegoKey StegoKey::from_decimal(std::string_view text) {
  if (text.empty() || text.size() > kMaxKeyDecimalDigits)
    fail(StegoErrc::InvalidKey, "stego key must be a decimal string of 1.." +
                                    std::to_string(kMaxKeyDecimalDigits) + " digits");
  BigInt value = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') fail(StegoErrc::InvalidKey, "stego key contains a non-digit character");
    value = value * 10 + (ch - '0');
  }
  return StegoKey(std::move(value));
}

std::string StegoKey::to_decimal() const { return value_.str(); }

RateSequence::RateSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty() || bits_.front() != 1)
    throw std::invalid_argument("rate sequence must be non-empty with a leading 1");
}

std::string RateSequence::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

EmbeddingSequence encode_message(const SecretMessage& message) {
  std::vector<std::uint8_t> digits;
  digits.reserve(message.size() * 4);
  for (char ch : message.text()) {
    const auto b = static_cast<unsigned char>(ch);
    for (int shift = 6; shift >= 0; shift -= 2) digits.push_back(static_cast<std::uint8_t>((b >> shift) & 3));
  }
  return EmbeddingSequence(std::move(digits));
}

SecretMessage decode_digits(std::span<const std::uint8_t> digits) {
  if (digits.empty() || digits.size() % 4 != 0)
    fail(StegoErrc::InvalidSequence, "digit count must be a positive multiple of 4");
  std::string text;
  text.reserve(digits.size() / 4);
  for (std::size_t i = 0; i < digits.size(); i += 4) {
    auto four = digits.subspan(i, 4);
    if (std::any_of(four.begin(), four.end(), [](std::uint8_t d) { return d > 3; }))
      fail(StegoErrc::InvalidSequence, "digit out of range 0..3");
    text.push_back(static_cast<char>(byte_from_digits(four)));
  }
  if (!is_printable(text)) fail(StegoErrc::NonPrintableResult, "decoded message is not printable");
  return SecretMessage(text);
}

BigInt sequence_value(const EmbeddingSequence& sequence) {
  BigInt value = 0;
  for (auto d : sequence.digits()) {
    value <<= 2;
    value += d;
  }
  return value;
}

StegoKey derive_stego_key(const EmbeddingSequence& sequence, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) fail(StegoErrc::InvalidLength, "image has no pixels");
  BigInt value = sequence_value(sequence);
  if (value == 0) fail(StegoErrc::DegenerateKey, "embedding sequence is all zeros");
  return StegoKey(value * pixel_count_of(rows, cols));
}

EmbeddingSequence recover_embedding_sequence(const StegoKey& key, std::size_t rows, std::size_t cols) {
  const BigInt size = pixel_count_of(rows, cols);
  BigInt quotient;
  BigInt remainder;
  boost::multiprecision::divide_qr(key.value(), size, quotient, remainder);
  if (remainder != 0) fail(StegoErrc::InvalidKey, "stego key is not a multiple of the image size");
  if (quotient == 0) fail(StegoErrc::InvalidKey, "stego key is smaller than the image size");

  std::vector<std::uint8_t> digits;
  while (quotient != 0) {
    digits.push_back(static_cast<std::uint8_t>(static_cast<unsigned>(quotient & 3)));
    quotient >>= 2;
  }
  while (digits.size() % 4 != 0) digits.push_back(0);
  std::reverse(digits.begin(), digits.end());
  // A leading NUL byte cannot survive the padding; guard anyway so that a
  // future change to the padding rule cannot silently shorten messages.
  if (byte_from_digits(std::span(digits).first(4)) == 0)
    fail(StegoErrc::NonPrintableResult, "recovered sequence starts with a NUL byte");
  return EmbeddingSequence(std::move(digits));
}

RateSequence derive_rate_sequence(const StegoKey& key) {
  const auto top = boost::multiprecision::msb(key.value());
  std::vector<std::uint8_t> bits;
  bits.reserve(top + 1);
  for (auto i = static_cast<long long>(top); i >= 0; --i)
    bits.push_back(boost::multiprecision::bit_test(key.value(), static_cast<unsigned>(i)) ? 1 : 0);
  return RateSequence(std::move(bits));
}

std::optional<ChannelAssignment> assign_channels(const Rgb& pixel, std::uint8_t digit) {
  if (digit > 3) throw std::invalid_argument("assign_channels: digit out of range");
  if (digit == 0) return std::nullopt;

  const auto indicator = static_cast<Channel>(digit - 1);
  // Remaining two channels in canonical R < G < B order; ties go to the first.
  Channel first = Channel::R;
  Channel second = Channel::B;
  switch (indicator) {
    case Channel::R: first = Channel::G; second = Channel::B; break;
    case Channel::G: first = Channel::R; second = Channel::B; break;
    case Channel::B: first = Channel::R; second = Channel::G; break;
  }
  if (pixel[second] < pixel[first]) return ChannelAssignment{indicator, second, first};
  return ChannelAssignment{indicator, first, second};
}

Rgb embed_pixel(const Rgb& pixel, const ChannelAssignment& assignment, std::uint8_t rate_bit,
                std::span<const std::uint8_t> payload_bits) {
  if (rate_bit > 1) throw std::invalid_argument("embed_pixel: rate bit must be 0 or 1");
  const int width = rate_bit + 1;
  if (payload_bits.size() != static_cast<std::size_t>(width))
    throw std::invalid_argument("embed_pixel: payload size must equal the rate");

  int payload = 0;
  for (auto bit : payload_bits) payload = (payload << 1) | (bit & 1);

  const int mask = (1 << width) - 1;
  const int step = 1 << width;
  int data = (pixel[assignment.data] & ~mask) | payload;
  int third = (pixel[assignment.third] & ~1) | rate_bit;

  // Extraction re-derives the data channel as the lower of the two
  // non-indicator channels, so data < third must hold strictly. Both
  // adjustments keep the payload bits and the signal bit intact.
  while (data >= third && data >= step) data -= step;
  while (data >= third) {
    if (third + 2 > 255) {
      throw StegoError(StegoErrc::PixelUnusable, "cannot order data below third channel");
    }
    third += 2;
  }

  Rgb out = pixel;
  out[assignment.data] = static_cast<std::uint8_t>(data);
  out[assignment.third] = static_cast<std::uint8_t>(third);
  return out;
}

std::vector<std::uint8_t> read_pixel(const Rgb& pixel, const ChannelAssignment& assignment,
                                     std::uint8_t expected_rate_bit) {
  const std::uint8_t signal = pixel[assignment.third] & 1;
  if (signal != expected_rate_bit) {
    throw StegoError(StegoErrc::TamperError, "third-channel rate signal disagrees with the rate sequence");
  }
  const int width = signal + 1;
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(width));
  for (int shift = width - 1; shift >= 0; --shift)
    bits.push_back(static_cast<std::uint8_t>((pixel[assignment.data] >> shift) & 1));
  return bits;
}

std::vector<WalkStep> plan_walk(const EmbeddingSequence& sequence, const RateSequence& rates,
                                std::size_t pixel_count, std::size_t bit_count) {
  std::vector<WalkStep> steps;
  std::size_t placed = 0;
  for (std::size_t i = 0; i < pixel_count && placed < bit_count; ++i) {
    const std::uint8_t digit = sequence[i % sequence.size()];
    if (digit == 0) continue;
    const std::uint8_t rate_bit = rates[i % rates.size()];
    const std::size_t take = std::min<std::size_t>(rate_bit + 1u, bit_count - placed);
    steps.push_back(WalkStep{i, digit, rate_bit, placed, take});
    placed += take;
  }
  if (placed < bit_count) {
    fail(StegoErrc::CapacityError, "image holds " + std::to_string(placed) + " of " +
                                       std::to_string(bit_count) + " message bits");
  }
  return steps;
}

EmbedResult embed(const PixelImage& cover, const SecretMessage& message) {
  if (cover.empty()) fail(StegoErrc::CapacityError, "cover image is empty");
  const EmbeddingSequence sequence = encode_message(message);
  StegoKey key = derive_stego_key(sequence, cover.rows(), cover.cols());
  const RateSequence rates = derive_rate_sequence(key);
  const auto steps = plan_walk(sequence, rates, cover.pixel_count(), message.bit_count());

  std::vector<std::uint8_t> bits;
  bits.reserve(message.bit_count());
  for (char ch : message.text()) {
    for (int shift = 7; shift >= 0; --shift)
      bits.push_back(static_cast<std::uint8_t>((static_cast<unsigned char>(ch) >> shift) & 1));
  }

  PixelImage stego = cover;
  std::vector<std::uint8_t> payload;
  for (const auto& step : steps) {
    const Rgb& px = cover[step.pixel_index];
    const auto assignment = *assign_channels(px, step.digit);
    payload.assign(static_cast<std::size_t>(step.rate_bit) + 1, 0);  // zero-padded tail
    std::copy_n(bits.begin() + static_cast<std::ptrdiff_t>(step.first_bit), step.payload_bits,
                payload.begin());
    stego[step.pixel_index] = embed_pixel(px, assignment, step.rate_bit, payload);
  }
  return EmbedResult{std::move(stego), std::move(key)};
}

SecretMessage extract(const PixelImage& stego, const StegoKey& key) {
  if (stego.empty()) fail(StegoErrc::CapacityError, "stego image is empty");
  const EmbeddingSequence sequence = recover_embedding_sequence(key, stego.rows(), stego.cols());
  const RateSequence rates = derive_rate_sequence(key);
  const std::size_t bit_count = sequence.message_length() * 8;
  const auto steps = plan_walk(sequence, rates, stego.pixel_count(), bit_count);

  std::string text(sequence.message_length(), '\0');
  for (const auto& step : steps) {
    const Rgb& px = stego[step.pixel_index];
    const auto bits = read_pixel(px, *assign_channels(px, step.digit), step.rate_bit);
    for (std::size_t k = 0; k < step.payload_bits; ++k) {
      const std::size_t pos = step.first_bit + k;
      if (bits[k]) text[pos / 8] = static_cast<char>(text[pos / 8] | (0x80 >> (pos % 8)));
    }
  }
  if (!is_printable(text)) fail(StegoErrc::NonPrintableResult, "extracted message is not printable");
  return SecretMessage(text);
}

BigInt keyspace_size(int key_length_digits) {
  if (key_length_digits < 2) fail(StegoErrc::InvalidLength, "key length must be at least 2");
  return 2 * boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(key_length_digits - 2));
}

}  // namespace stegoguard
