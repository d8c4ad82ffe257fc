#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stegoguard/stego.hpp"

namespace stegoguard {

struct ImageSize {
  std::size_t rows = 0;
  std::size_t cols = 0;
  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Per-site verification settings. The key is carried next to the expected
/// message; the two are cross-checked at load time but only warned about.
struct SiteProfile {
  std::string profile_id;
  std::vector<std::string> domain_tokens;
  SecretMessage expected_message;
  StegoKey stego_key;
  std::vector<std::string> image_hints;
  std::vector<std::string> legit_hosts;
  std::optional<ImageSize> image_size;

  friend bool operator==(const SiteProfile&, const SiteProfile&) = default;
};

class ProfileParseError : public std::runtime_error {
 public:
  ProfileParseError(std::string source, std::string field, const std::string& what)
      : std::runtime_error(source + ": " + (field.empty() ? "" : "field '" + field + "': ") + what),
        source_(std::move(source)),
        field_(std::move(field)) {}

  const std::string& source() const noexcept { return source_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string source_;
  std::string field_;
};

/// Profile documents are JSON objects with the keys profile_id, domain_tokens,
/// expected_message, stego_key (decimal string), and optionally image_hints,
/// legit_hosts and image_size {rows, cols}. Unknown keys are rejected.
SiteProfile parse_profile(std::string_view json_text, const std::string& source = "<memory>");

std::string serialize_profile(const SiteProfile& profile);

/// Non-fatal mismatches between stego_key, expected_message and image_size.
std::vector<std::string> consistency_warnings(const SiteProfile& profile);

struct ProfileSet {
  std::vector<SiteProfile> profiles;
  std::vector<std::string> warnings;

  const SiteProfile* find(std::string_view id) const noexcept;
};

/// Loads every *.json file in `directory` (sorted by name). Any invalid file or
/// duplicate profile_id rejects the whole load.
ProfileSet load_profiles(const std::filesystem::path& directory);

}  // namespace stegoguard
