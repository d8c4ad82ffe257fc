#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stegoguard/fetch.hpp"
#include "stegoguard/image.hpp"
#include "stegoguard/profile.hpp"
#include "stegoguard/stego.hpp"
#include "stegoguard/verifier.hpp"

namespace stegoguard {

enum class Scenario {
  PageLoadBroken,
  BlacklistIndependence,
  WhitelistIndependence,
  Redirection,
  DnsSpoof,
  PrintScreen,
  WrongKey,
  BruteForce,
  LsbNoise,
  Crop,
};

enum class Outcome { Resisted, NotResisted };

const char* to_string(Scenario scenario) noexcept;
const char* to_string(Outcome outcome) noexcept;
std::optional<Scenario> scenario_from_string(std::string_view name) noexcept;

struct AttackReport {
  Scenario scenario;
  Outcome outcome;
  std::string detail;

  friend bool operator==(const AttackReport&, const AttackReport&) = default;
};

enum class AttackErrc { InvalidParams, SearchSpaceTooLarge, FixtureMissing };

class AttackLabError : public std::runtime_error {
 public:
  AttackLabError(AttackErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  AttackErrc code() const noexcept { return code_; }

 private:
  AttackErrc code_;
};

// ---- tampering -----------------------------------------------------------

/// Flips `flips` distinct channel LSBs chosen uniformly with `seed`.
struct LsbNoise {
  std::size_t flips = 0;
  std::uint64_t seed = 0;
};

/// Keeps the top-left rows x cols sub-image.
struct Crop {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// Exchanges R and B in every pixel.
struct ChannelSwap {};

using TamperKind = std::variant<LsbNoise, Crop, ChannelSwap>;

PixelImage tamper_image(const PixelImage& image, const TamperKind& kind);

// ---- key attacks -----------------------------------------------------------

/// Candidate keys share the true key's digit length; a trial succeeds when
/// extraction returns `expected`. Resisted iff the success rate is <= 1%.
AttackReport wrong_key_trials(const PixelImage& stego, const StegoKey& true_key, const SecretMessage& expected,
                              std::size_t trials, std::uint64_t seed);

/// Every channel's LSB in row-major R,G,B order, packed MSB-first into bytes.
std::string naive_lsb_dump(const PixelImage& image);

/// Resisted iff the naive dump does not contain `expected`.
AttackReport print_screen_attack(const PixelImage& stego, const SecretMessage& expected);

/// Candidate embedding sequences the brute-force search walks.
enum class KeyPatternSpace {
  /// First digit 1, second digit 0 or 1, every later digit 1..3: a message
  /// that opens with a character in 0x40..0x5F and never leaves a pixel of
  /// the sequence unused. Its size is exactly keyspace_size(n).
  TablePattern,
  /// Every sequence that decodes to printable ASCII: 95^(n/4) candidates.
  Printable,
};

/// Refusal threshold for exhaustive search.
inline constexpr std::uint64_t kBruteForceCandidateCap = 3'000'000;

BigInt pattern_space_size(int digits, KeyPatternSpace space);

struct BruteForceResult {
  std::uint64_t candidates = 0;
  std::uint64_t successes = 0;
  std::vector<StegoKey> successful_keys;
};

/// Enumerates every candidate sequence of `max_digits` digits (a positive
/// multiple of 4) and counts keys whose extraction yields `expected`. Throws
/// SearchSpaceTooLarge above kBruteForceCandidateCap.
BruteForceResult brute_force_enumerate(const PixelImage& stego, const SecretMessage& expected, int max_digits,
                                       KeyPatternSpace space = KeyPatternSpace::TablePattern);

/// NotResisted when some candidate reproduces the message.
AttackReport brute_force_search(const PixelImage& stego, const SecretMessage& expected, int max_digits,
                                KeyPatternSpace space = KeyPatternSpace::TablePattern);

/// Resisted with the keyspace recorded when the message's pattern space is
/// beyond the cap; otherwise runs brute_force_search.
AttackReport brute_force_assessment(const PixelImage& stego, const SecretMessage& expected);

/// Tampers the stego image and verifies it as the only page image.
/// Resisted iff the verdict is Phished.
AttackReport tamper_scenario(const PixelImage& stego, const SiteProfile& profile, const TamperKind& kind);

// ---- page scenarios ----------------------------------------------------------

/// A page and every resource it links to, keyed by absolute URL.
struct FixturePage {
  std::string url;
  std::map<std::string, FetchResponse> resources;
};

struct ScenarioFixtures {
  std::optional<FixturePage> legit;   // genuine page with the stego image
  std::optional<FixturePage> clone;   // look-alike page without the stego image
  std::optional<FixturePage> broken;  // genuine page whose stego image fails to load
};

/// Copies `page` onto `new_origin` (scheme://host[:port]), rewriting resource
/// keys and literal origin references in bodies.
FixturePage rehost(const FixturePage& page, std::string_view new_origin);

Verdict verify_fixture(const FixturePage& page, const SiteProfile& profile);

/// Writes `page` in the layout DirectoryFetcher serves: <root>/<host>[_port]/path,
/// "index.html" for directory paths and "<name>.redirect" for 3xx entries.
void export_fixture_page(const FixturePage& page, const std::filesystem::path& root);

/// One report per attack row, in order: PageLoadBroken, BlacklistIndependence,
/// WhitelistIndependence, Redirection, DnsSpoof. Throws FixtureMissing.
std::vector<AttackReport> run_scenario_suite(const SiteProfile& profile, const ScenarioFixtures& fixtures);

/// A clone that copies the genuine stego image verbatim. Documents the
/// copy-attack limitation: the verdict is Legitimate.
Verdict copy_attack_probe(const SiteProfile& profile, const ScenarioFixtures& fixtures);

// ---- demo world & reporting -------------------------------------------------------

/// Self-contained bank profile, cover, stego logo and scenario pages.
struct DemoWorld {
  SiteProfile profile;
  PixelImage cover;
  PixelImage stego;
  ScenarioFixtures fixtures;
};

inline constexpr std::string_view kDemoMessage = "SSE Lab";

DemoWorld make_demo_world(std::uint64_t seed, std::string_view message = kDemoMessage);

/// Smooth gradient plus seeded noise; every channel stays in 16..239.
PixelImage synthetic_cover(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Every scenario in enum order, deterministic for a given seed.
std::vector<AttackReport> run_all_scenarios(std::uint64_t seed);

std::string reports_to_json(std::span<const AttackReport> reports);
std::string reports_to_table(std::span<const AttackReport> reports);

}  // namespace stegoguard
