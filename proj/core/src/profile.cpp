#include "stegoguard/profile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stegoguard {
namespace {

using json = nlohmann::json;

const std::set<std::string, std::less<>> kKnownFields = {
    "profile_id", "domain_tokens", "expected_message", "stego_key", "image_hints", "legit_hosts", "image_size"};

bool is_lower(std::string_view s) {
  return std::none_of(s.begin(), s.end(), [](unsigned char c) { return c >= 'A' && c <= 'Z'; });
}

class FieldReader {
 public:
  FieldReader(const json& doc, const std::string& source) : doc_(doc), source_(source) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ProfileParseError(source_, field, what);
  }

  const json& require(const std::string& field) const {
    if (!doc_.contains(field)) fail(field, "missing required field");
    return doc_.at(field);
  }

  std::string string_field(const std::string& field) const {
    const json& v = require(field);
    if (!v.is_string()) fail(field, "expected a string");
    return v.get<std::string>();
  }

  std::vector<std::string> string_list(const std::string& field, bool required) const {
    if (!doc_.contains(field)) {
      if (required) fail(field, "missing required field");
      return {};
    }
    const json& v = doc_.at(field);
    if (!v.is_array()) fail(field, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& item : v) {
      if (!item.is_string()) fail(field, "expected an array of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

 private:
  const json& doc_;
  const std::string& source_;
};

}  // namespace

SiteProfile parse_profile(std::string_view json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ProfileParseError(source, "", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProfileParseError(source, "", "profile must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kKnownFields.contains(key)) throw ProfileParseError(source, key, "unknown field");
  }

  const FieldReader reader(doc, source);

  std::string id = reader.string_field("profile_id");
  if (id.empty() || !std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.';
      }))
    reader.fail("profile_id", "must be a non-empty identifier of [A-Za-z0-9._-]");

  auto tokens = reader.string_list("domain_tokens", true);
  if (tokens.empty()) reader.fail("domain_tokens", "must not be empty");
  for (const auto& t : tokens) {
    if (t.size() < 3) reader.fail("domain_tokens", "token '" + t + "' is shorter than 3 characters");
    if (!is_lower(t)) reader.fail("domain_tokens", "token '" + t + "' must be lowercase");
  }

  std::optional<SecretMessage> message;
  try {
    message.emplace(reader.string_field("expected_message"));
  } catch (const StegoError& e) {
    reader.fail("expected_message", e.what());
  }

  const json& key_node = reader.require("stego_key");
  if (!key_node.is_string()) reader.fail("stego_key", "must be a decimal string");
  std::optional<StegoKey> key;
  try {
    key.emplace(StegoKey::from_decimal(key_node.get<std::string>()));
  } catch (const StegoError& e) {
    reader.fail("stego_key", e.what());
  }
  if (key->to_decimal() != key_node.get<std::string>())
    reader.fail("stego_key", "must not carry leading zeros");

  auto hints = reader.string_list("image_hints", false);
  auto hosts = reader.string_list("legit_hosts", false);
  for (const auto& h : hosts) {
    if (h.empty() || !is_lower(h)) reader.fail("legit_hosts", "hosts must be non-empty lowercase names");
  }

  std::optional<ImageSize> size;
  if (doc.contains("image_size")) {
    const json& node = doc.at("image_size");
    if (!node.is_object() || node.size() != 2 || !node.contains("rows") || !node.contains("cols") ||
        !node.at("rows").is_number_unsigned() || !node.at("cols").is_number_unsigned())
      reader.fail("image_size", "expected {\"rows\": n, \"cols\": n}");
    size = ImageSize{node.at("rows").get<std::size_t>(), node.at("cols").get<std::size_t>()};
    if (size->rows == 0 || size->cols == 0) reader.fail("image_size", "dimensions must be positive");
  }

  return SiteProfile{std::move(id),      std::move(tokens), std::move(*message), std::move(*key),
                     std::move(hints),   std::move(hosts),  size};
}

std::string serialize_profile(const SiteProfile& profile) {
  json doc = json::object();
  doc["profile_id"] = profile.profile_id;
  doc["domain_tokens"] = profile.domain_tokens;
  doc["expected_message"] = profile.expected_message.text();
  doc["stego_key"] = profile.stego_key.to_decimal();
  if (!profile.image_hints.empty()) doc["image_hints"] = profile.image_hints;
  if (!profile.legit_hosts.empty()) doc["legit_hosts"] = profile.legit_hosts;
  if (profile.image_size) doc["image_size"] = {{"rows", profile.image_size->rows}, {"cols", profile.image_size->cols}};
  return doc.dump(2) + "\n";
}

std::vector<std::string> consistency_warnings(const SiteProfile& profile) {
  std::vector<std::string> warnings;
  const BigInt value = sequence_value(encode_message(profile.expected_message));
  BigInt pixels;
  BigInt remainder;
  boost::multiprecision::divide_qr(profile.stego_key.value(), value, pixels, remainder);
  if (remainder != 0) {
    warnings.push_back(profile.profile_id + ": stego_key is not derived from expected_message");
    return warnings;
  }
  if (profile.image_size) {
    const BigInt expected = BigInt(profile.image_size->rows) * BigInt(profile.image_size->cols);
    if (pixels != expected) {
      warnings.push_back(profile.profile_id + ": stego_key implies " + pixels.str() + " pixels but image_size is " +
                         std::to_string(profile.image_size->rows) + "x" + std::to_string(profile.image_size->cols));
    }
  }
  return warnings;
}

const SiteProfile* ProfileSet::find(std::string_view id) const noexcept {
  for (const auto& p : profiles) {
    if (p.profile_id == id) return &p;
  }
  return nullptr;
}

ProfileSet load_profiles(const std::filesystem::path& directory) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec))
    throw ProfileParseError(directory.string(), "", "not a readable directory");

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  ProfileSet set;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw ProfileParseError(file.string(), "", "cannot open file");
    std::ostringstream text;
    text << in.rdbuf();
    SiteProfile profile = parse_profile(text.str(), file.string());
    if (set.find(profile.profile_id))
      throw ProfileParseError(file.string(), "profile_id", "duplicate profile_id '" + profile.profile_id + "'");
    for (auto& w : consistency_warnings(profile)) set.warnings.push_back(std::move(w));
    set.profiles.push_back(std::move(profile));
  }
  return set;
}

}  // namespace stegoguard
