#pragma once

// Loopback verification service. The handlers are plain functions over
// request bodies so they can be exercised without sockets;
// VerificationServer wires them to HTTP routes:
//
//   GET  /health    -> {"status":"ok"}
//   POST /verify    -> VerifyResponse (400 malformed request, 502 fetch failure)
//   GET  /profiles  -> [{"profile_id":..., "domain_tokens":[...]}]

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stegoguard/fetch.hpp"
#include "stegoguard/profile.hpp"
#include "stegoguard/verifier.hpp"

namespace stegoguard {

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyRequest {
  std::string url;
  std::optional<std::vector<std::string>> image_refs;

  friend bool operator==(const VerifyRequest&, const VerifyRequest&) = default;
};

struct VerifyResponse {
  std::string status;
  std::string reason;
  std::optional<std::string> matched_image;
  std::optional<std::string> profile_id;
  std::optional<std::string> final_url;

  friend bool operator==(const VerifyResponse&, const VerifyResponse&) = default;
};

/// Throws BadRequest on invalid JSON, unknown fields or non-absolute URLs.
VerifyRequest parse_verify_request(std::string_view body);
std::string serialize_request(const VerifyRequest& request);

VerifyResponse to_response(const ProfileVerdict& result);
/// Throws BadRequest when the document is not a well-formed response.
VerifyResponse parse_verify_response(std::string_view body);
std::string serialize_response(const VerifyResponse& response);

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

HttpReply handle_health();
HttpReply handle_profiles(const ProfileSet& profiles);
HttpReply handle_verify(std::string_view body, const ProfileSet& profiles, PageFetcher& fetcher,
                        const FetchOptions& options = {});

struct ServerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
  FetchOptions fetch;
};

class VerificationServer {
 public:
  VerificationServer(ProfileSet profiles, std::shared_ptr<PageFetcher> fetcher, ServerOptions options = {});
  ~VerificationServer();

  VerificationServer(const VerificationServer&) = delete;
  VerificationServer& operator=(const VerificationServer&) = delete;

  /// Binds the listening socket and returns the bound port. Throws
  /// std::runtime_error when binding fails.
  std::uint16_t bind();
  /// Serves until stop() is called. bind() must have succeeded.
  void serve();
  void stop();
  std::uint16_t port() const noexcept { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::uint16_t port_ = 0;
};

}  // namespace stegoguard
