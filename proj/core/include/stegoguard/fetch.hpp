#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stegoguard/url.hpp"

namespace stegoguard {

struct FetchResponse {
  int status = 200;
  std::string body;
  std::string content_type;
  std::string location;  // Location header of 3xx responses
};

enum class FetchErrc { Transport, TooLarge, TooManyRedirects, UnsupportedScheme };

/// Network-level failure. HTTP status codes are not errors; they come back
/// in FetchResponse.
class FetchError : public std::runtime_error {
 public:
  FetchError(FetchErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  FetchErrc code() const noexcept { return code_; }

 private:
  FetchErrc code_;
};

struct FetchOptions {
  std::chrono::milliseconds timeout{10'000};
  std::size_t max_resource_bytes = 8 * 1024 * 1024;
  int max_redirects = 5;
};

/// Single-request capability. Implementations must be safe to call from
/// several threads at once and must not follow redirects themselves.
class PageFetcher {
 public:
  virtual ~PageFetcher() = default;
  virtual FetchResponse get(const Url& url, const FetchOptions& options) = 0;
};

/// Serves canned responses keyed by absolute URL (fragment ignored).
/// Unknown URLs answer 404. Populate before sharing across threads.
class MemoryFetcher : public PageFetcher {
 public:
  void add(std::string_view url, FetchResponse response);
  void add_redirect(std::string_view from, std::string_view to, int status = 302);
  FetchResponse get(const Url& url, const FetchOptions& options) override;

  const std::map<std::string, FetchResponse>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, FetchResponse> entries_;
};

/// Maps http(s)://host[:port]/path onto <root>/<host>[_port]/path. Paths that
/// end in '/' serve index.html. A sibling file "<name>.redirect" holding a URL
/// answers 302 to that URL.
class DirectoryFetcher : public PageFetcher {
 public:
  explicit DirectoryFetcher(std::filesystem::path root);
  FetchResponse get(const Url& url, const FetchOptions& options) override;

 private:
  std::filesystem::path root_;
};

/// Real HTTP(S) client. `resolve` pins host names to address:port pairs,
/// the same way curl --resolve does; used to stage DNS-spoofing runs.
class HttpFetcher : public PageFetcher {
 public:
  struct Override {
    std::string address;
    std::uint16_t port;
  };

  HttpFetcher() = default;
  explicit HttpFetcher(std::map<std::string, Override> resolve) : resolve_(std::move(resolve)) {}

  FetchResponse get(const Url& url, const FetchOptions& options) override;

 private:
  std::map<std::string, Override> resolve_;
};

struct FetchedDocument {
  Url final_url;
  FetchResponse response;
  int redirects = 0;
};

/// Follows 3xx Location headers up to options.max_redirects hops.
FetchedDocument fetch_following_redirects(PageFetcher& fetcher, const Url& url, const FetchOptions& options);

/// Raw src attribute values of <img> elements, in document order.
std::vector<std::string> extract_image_sources(std::string_view html);

/// Canonical key used by MemoryFetcher and for de-duplicating image URLs.
std::string canonical_url(const Url& url);

}  // namespace stegoguard
