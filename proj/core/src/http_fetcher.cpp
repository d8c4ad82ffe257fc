#include <httplib.h>

#include "stegoguard/fetch.hpp"

namespace stegoguard {

FetchResponse HttpFetcher::get(const Url& url, const FetchOptions& options) {
  if (url.scheme != "http" && url.scheme != "https")
    throw FetchError(FetchErrc::UnsupportedScheme, "unsupported scheme: " + url.scheme);

  std::string connect_host = url.host;
  std::uint16_t connect_port = url.effective_port();
  if (const auto it = resolve_.find(url.host); it != resolve_.end()) {
    connect_host = it->second.address;
    connect_port = it->second.port;
  }

  httplib::Client client(url.scheme + "://" + connect_host + ":" + std::to_string(connect_port));
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  client.set_follow_location(false);

  httplib::Headers headers;
  std::string host_header = url.host;
  if (url.port) host_header += ":" + std::to_string(*url.port);
  headers.emplace("Host", host_header);

  FetchResponse out;
  bool too_large = false;
  auto result = client.Get(
      url.path_and_query(), headers,
      [&](const httplib::Response& response) {
        out.status = response.status;
        out.content_type = response.get_header_value("Content-Type");
        out.location = response.get_header_value("Location");
        return true;
      },
      [&](const char* data, std::size_t length) {
        if (out.body.size() + length > options.max_resource_bytes) {
          too_large = true;
          return false;
        }
        out.body.append(data, length);
        return true;
      });

  if (too_large) throw FetchError(FetchErrc::TooLarge, url.to_string() + " exceeds the resource size cap");
  if (!result) {
    throw FetchError(FetchErrc::Transport, "GET " + url.to_string() + " failed: " + httplib::to_string(result.error()));
  }
  return out;
}

}  // namespace stegoguard
