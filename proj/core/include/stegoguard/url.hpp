#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stegoguard {

class MalformedUrl : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Absolute URL split into its components. Scheme and host are lowercased;
/// userinfo is discarded so that "https://bank.test@evil.test/" has host
/// "evil.test".
struct Url {
  std::string scheme;
  std::string host;
  std::optional<std::uint16_t> port;
  std::string path = "/";
  std::string query;     // without '?'
  std::string fragment;  // without '#'

  std::uint16_t effective_port() const noexcept;
  /// scheme://host[:port]
  std::string origin() const;
  std::string path_and_query() const;
  std::string to_string() const;
};

/// Throws MalformedUrl unless `text` is scheme://authority[...] with a
/// non-empty host.
Url parse_url(std::string_view text);

bool is_absolute_url(std::string_view text) noexcept;

/// RFC 3986 reference resolution (fragments of the base are dropped).
Url resolve_url(const Url& base, std::string_view reference);

bool is_loopback_host(std::string_view host) noexcept;

}  // namespace stegoguard
