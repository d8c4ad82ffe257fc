#include "stegoguard/attack_lab.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace stegoguard {
namespace {

constexpr double kWrongKeyTolerance = 0.01;

std::string format_rate(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::string describe(const TamperKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LsbNoise>)
          return "LsbNoise(flips=" + std::to_string(k.flips) + ",seed=" + std::to_string(k.seed) + ")";
        else if constexpr (std::is_same_v<T, Crop>)
          return "Crop(" + std::to_string(k.rows) + "x" + std::to_string(k.cols) + ")";
        else
          return "ChannelSwap";
      },
      kind);
}

BigInt value_of_bytes(std::span<const std::uint8_t> bytes) {
  BigInt v = 0;
  for (auto b : bytes) {
    v <<= 8;
    v += b;
  }
  return v;
}

bool extracts_to(const PixelImage& stego, const BigInt& key_value, const SecretMessage& expected) {
  try {
    return extract(stego, StegoKey(key_value)) == expected;
  } catch (const StegoError&) {
    return false;
  }
}

}  // namespace

const char* to_string(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::PageLoadBroken: return "PageLoadBroken";
    case Scenario::BlacklistIndependence: return "BlacklistIndependence";
    case Scenario::WhitelistIndependence: return "WhitelistIndependence";
    case Scenario::Redirection: return "Redirection";
    case Scenario::DnsSpoof: return "DnsSpoof";
    case Scenario::PrintScreen: return "PrintScreen";
    case Scenario::WrongKey: return "WrongKey";
    case Scenario::BruteForce: return "BruteForce";
    case Scenario::LsbNoise: return "LsbNoise";
    case Scenario::Crop: return "Crop";
  }
  return "Unknown";
}

const char* to_string(Outcome outcome) noexcept {
  return outcome == Outcome::Resisted ? "Resisted" : "NotResisted";
}

std::optional<Scenario> scenario_from_string(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(Scenario::Crop); ++i) {
    const auto s = static_cast<Scenario>(i);
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

PixelImage tamper_image(const PixelImage& image, const TamperKind& kind) {
  if (image.empty()) throw AttackLabError(AttackErrc::InvalidParams, "cannot tamper with an empty image");

  if (const auto* noise = std::get_if<LsbNoise>(&kind)) {
    const std::size_t slots = image.pixel_count() * 3;
    if (noise->flips > slots)
      throw AttackLabError(AttackErrc::InvalidParams, "more flips requested than channel LSBs available");
    std::mt19937_64 rng(noise->seed);
    std::vector<std::size_t> chosen;
    if (noise->flips * 2 > slots) {
      chosen.resize(slots);
      std::iota(chosen.begin(), chosen.end(), std::size_t{0});
      std::shuffle(chosen.begin(), chosen.end(), rng);
      chosen.resize(noise->flips);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, slots - 1);
      std::unordered_set<std::size_t> seen;
      while (chosen.size() < noise->flips) {
        const std::size_t slot = pick(rng);
        if (seen.insert(slot).second) chosen.push_back(slot);
      }
    }
    PixelImage out = image;
    for (std::size_t slot : chosen) {
      Rgb& px = out[slot / 3];
      const auto channel = static_cast<Channel>(slot % 3);
      px[channel] = static_cast<std::uint8_t>(px[channel] ^ 1);
    }
    return out;
  }

  if (const auto* crop = std::get_if<Crop>(&kind)) {
    if (crop->rows == 0 || crop->cols == 0 || crop->rows > image.rows() || crop->cols > image.cols())
      throw AttackLabError(AttackErrc::InvalidParams, "crop rectangle outside the image");
    std::vector<Rgb> pixels;
    pixels.reserve(crop->rows * crop->cols);
    std::optional<std::vector<std::uint8_t>> alpha;
    if (image.has_alpha()) alpha.emplace();
    for (std::size_t y = 0; y < crop->rows; ++y) {
      for (std::size_t x = 0; x < crop->cols; ++x) {
        pixels.push_back(image.at(y, x));
        if (alpha) alpha->push_back((*image.alpha())[y * image.cols() + x]);
      }
    }
    return PixelImage(crop->rows, crop->cols, std::move(pixels), std::move(alpha));
  }

  PixelImage out = image;
  for (Rgb& px : out.pixels()) std::swap(px.r, px.b);
  return out;
}

AttackReport wrong_key_trials(const PixelImage& stego, const StegoKey& true_key, const SecretMessage& expected,
                              std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw AttackLabError(AttackErrc::InvalidParams, "trials must be at least 1");
  if (stego.empty()) throw AttackLabError(AttackErrc::InvalidParams, "stego image is empty");

  std::size_t message_bytes = expected.size();
  try {
    message_bytes = recover_embedding_sequence(true_key, stego.rows(), stego.cols()).message_length();
  } catch (const StegoError&) {
    // Key does not fit this image; fall back to the expected message length.
  }
  const BigInt pixels = BigInt(stego.rows()) * BigInt(stego.cols());

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> lead(1, 255);
  std::uniform_int_distribution<int> any(0, 255);

  std::size_t matches = 0, nonprintable = 0, tamper = 0, other_errors = 0, garbage = 0;
  std::string sample;
  std::vector<std::uint8_t> bytes(message_bytes);
  for (std::size_t t = 0; t < trials; ++t) {
    BigInt key_value;
    do {
      bytes[0] = static_cast<std::uint8_t>(lead(rng));
      for (std::size_t i = 1; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(any(rng));
      key_value = value_of_bytes(bytes) * pixels;
    } while (key_value == true_key.value());

    try {
      const SecretMessage got = extract(stego, StegoKey(key_value));
      if (got == expected) {
        ++matches;
      } else {
        ++garbage;
        if (sample.empty()) sample = got.text();
      }
    } catch (const StegoError& e) {
      if (e.code() == StegoErrc::NonPrintableResult) ++nonprintable;
      else if (e.code() == StegoErrc::TamperError) ++tamper;
      else ++other_errors;
    }
  }

  const double rate = static_cast<double>(matches) / static_cast<double>(trials);
  std::ostringstream detail;
  detail << "trials=" << trials << " recovered_message=" << matches << " match_rate=" << format_rate(rate)
         << " tamper_error=" << tamper << " nonprintable=" << nonprintable << " garbage=" << garbage
         << " other_error=" << other_errors;
  if (!sample.empty()) detail << " sample_garbage=\"" << sample << "\"";
  return AttackReport{Scenario::WrongKey, rate <= kWrongKeyTolerance ? Outcome::Resisted : Outcome::NotResisted,
                      detail.str()};
}

std::string naive_lsb_dump(const PixelImage& image) {
  std::string out;
  out.reserve(image.pixel_count() * 3 / 8);
  unsigned acc = 0;
  int filled = 0;
  for (const Rgb& px : image.pixels()) {
    for (Channel c : {Channel::R, Channel::G, Channel::B}) {
      acc = (acc << 1) | (px[c] & 1u);
      if (++filled == 8) {
        out.push_back(static_cast<char>(acc));
        acc = 0;
        filled = 0;
      }
    }
  }
  return out;
}

AttackReport print_screen_attack(const PixelImage& stego, const SecretMessage& expected) {
  const std::string dump = naive_lsb_dump(stego);
  const bool found = dump.find(expected.text()) != std::string::npos;
  return AttackReport{Scenario::PrintScreen, found ? Outcome::NotResisted : Outcome::Resisted,
                      "dump_bytes=" + std::to_string(dump.size()) +
                          " contains_message=" + (found ? "yes" : "no")};
}

BigInt pattern_space_size(int digits, KeyPatternSpace space) {
  if (digits < 4 || digits % 4 != 0)
    throw AttackLabError(AttackErrc::InvalidParams, "digit count must be a positive multiple of 4");
  if (space == KeyPatternSpace::TablePattern) return keyspace_size(digits);
  return boost::multiprecision::pow(BigInt(95), static_cast<unsigned>(digits / 4));
}

BruteForceResult brute_force_enumerate(const PixelImage& stego, const SecretMessage& expected, int max_digits,
                                       KeyPatternSpace space) {
  if (stego.empty()) throw AttackLabError(AttackErrc::InvalidParams, "stego image is empty");
  const BigInt size = pattern_space_size(max_digits, space);
  if (size > kBruteForceCandidateCap) {
    throw AttackLabError(AttackErrc::SearchSpaceTooLarge,
                         size.str() + " candidates exceed the cap of " + std::to_string(kBruteForceCandidateCap));
  }

  const BigInt pixels = BigInt(stego.rows()) * BigInt(stego.cols());
  BruteForceResult result;
  auto consider = [&](const BigInt& sequence_value) {
    ++result.candidates;
    const BigInt key = sequence_value * pixels;
    if (extracts_to(stego, key, expected)) {
      ++result.successes;
      result.successful_keys.emplace_back(key);
    }
  };

  const auto n = static_cast<std::size_t>(max_digits);
  if (space == KeyPatternSpace::TablePattern) {
    // Odometer over positions: [1] x [0,1] x [1,2,3]^(n-2).
    std::vector<std::uint8_t> digits(n, 1);
    digits[1] = 0;
    for (;;) {
      BigInt v = 0;
      for (auto d : digits) {
        v <<= 2;
        v += d;
      }
      consider(v);
      std::size_t pos = n;
      while (pos-- > 1) {
        const std::uint8_t hi = pos == 1 ? 1 : 3;
        const std::uint8_t lo = pos == 1 ? 0 : 1;
        if (digits[pos] < hi) {
          ++digits[pos];
          break;
        }
        digits[pos] = lo;
      }
      if (pos == 0 || pos == static_cast<std::size_t>(-1)) break;
    }
  } else {
    std::vector<std::uint8_t> bytes(n / 4, 0x20);
    for (;;) {
      consider(value_of_bytes(bytes));
      std::size_t pos = bytes.size();
      while (pos-- > 0) {
        if (bytes[pos] < 0x7E) {
          ++bytes[pos];
          break;
        }
        bytes[pos] = 0x20;
      }
      if (pos == static_cast<std::size_t>(-1)) break;
    }
  }
  return result;
}

AttackReport brute_force_search(const PixelImage& stego, const SecretMessage& expected, int max_digits,
                                KeyPatternSpace space) {
  const auto result = brute_force_enumerate(stego, expected, max_digits, space);
  std::string detail = "space=" + std::string(space == KeyPatternSpace::TablePattern ? "table" : "printable") +
                       " digits=" + std::to_string(max_digits) + " candidates=" + std::to_string(result.candidates) +
                       " successes=" + std::to_string(result.successes);
  if (!result.successful_keys.empty()) detail += " first_key=" + result.successful_keys.front().to_decimal();
  return AttackReport{Scenario::BruteForce, result.successes == 0 ? Outcome::Resisted : Outcome::NotResisted,
                      std::move(detail)};
}

AttackReport brute_force_assessment(const PixelImage& stego, const SecretMessage& expected) {
  const int digits = static_cast<int>(expected.size() * 4);
  const BigInt size = keyspace_size(digits);
  if (size > kBruteForceCandidateCap) {
    return AttackReport{Scenario::BruteForce, Outcome::Resisted,
                        "digits=" + std::to_string(digits) + " keyspace=" + size.str() +
                            " exceeds desk-scale cap " + std::to_string(kBruteForceCandidateCap)};
  }
  return brute_force_search(stego, expected, digits);
}

AttackReport tamper_scenario(const PixelImage& stego, const SiteProfile& profile, const TamperKind& kind) {
  const PixelImage tampered = tamper_image(stego, kind);
  const std::vector<CandidateImage> images{CandidateImage{"stego-image", tampered}};
  const Verdict verdict = verify_images(images, profile);
  const Scenario scenario = std::holds_alternative<Crop>(kind) ? Scenario::Crop : Scenario::LsbNoise;
  return AttackReport{scenario, verdict.status == VerdictStatus::Phished ? Outcome::Resisted : Outcome::NotResisted,
                      describe(kind) + " verdict=" + to_string(verdict.status) + "/" + to_string(verdict.reason)};
}

std::string reports_to_json(std::span<const AttackReport> reports) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : reports) {
    doc.push_back({{"scenario", to_string(r.scenario)}, {"outcome", to_string(r.outcome)}, {"detail", r.detail}});
  }
  return doc.dump(2) + "\n";
}

std::string reports_to_table(std::span<const AttackReport> reports) {
  std::size_t name_width = 6;
  for (const auto& r : reports) name_width = std::max(name_width, std::string_view(to_string(r.scenario)).size());
  std::ostringstream out;
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  out << pad("S.No", 5) << "| " << pad("Attack", name_width) << " | Resists? | Detail\n";
  out << std::string(5, '-') << "+-" << std::string(name_width, '-') << "-+----------+" << std::string(40, '-') << "\n";
  std::size_t row = 1;
  for (const auto& r : reports) {
    out << pad(std::to_string(row++) + ".", 5) << "| " << pad(to_string(r.scenario), name_width) << " | "
        << pad(r.outcome == Outcome::Resisted ? "Yes" : "No", 8) << " | " << r.detail << "\n";
  }
  return out.str();
}

}  // namespace stegoguard
