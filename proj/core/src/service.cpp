#include "stegoguard/service.hpp"

#include <set>

#include <httplib.h>
#include <json.hpp>

namespace stegoguard {
namespace {

using json = nlohmann::json;

json parse_object(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw BadRequest(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw BadRequest("body must be a JSON object");
  return doc;
}

void reject_unknown(const json& doc, const std::set<std::string, std::less<>>& known) {
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw BadRequest("unknown field '" + key + "'");
  }
}

std::optional<std::string> optional_string(const json& doc, const char* field) {
  if (!doc.contains(field) || doc.at(field).is_null()) return std::nullopt;
  if (!doc.at(field).is_string()) throw BadRequest(std::string("field '") + field + "' must be a string");
  return doc.at(field).get<std::string>();
}

HttpReply error_reply(int status, std::string_view kind, std::string_view detail) {
  return HttpReply{status, json{{"error", kind}, {"detail", detail}}.dump()};
}

}  // namespace

VerifyRequest parse_verify_request(std::string_view body) {
  const json doc = parse_object(body);
  reject_unknown(doc, {"url", "image_refs"});
  if (!doc.contains("url") || !doc.at("url").is_string()) throw BadRequest("field 'url' must be a string");

  VerifyRequest request;
  request.url = doc.at("url").get<std::string>();
  if (!is_absolute_url(request.url)) throw BadRequest("field 'url' must be an absolute URL");

  if (doc.contains("image_refs") && !doc.at("image_refs").is_null()) {
    const json& refs = doc.at("image_refs");
    if (!refs.is_array()) throw BadRequest("field 'image_refs' must be an array of URLs");
    std::vector<std::string> out;
    for (const auto& ref : refs) {
      if (!ref.is_string() || !is_absolute_url(ref.get<std::string>()))
        throw BadRequest("every image_ref must be an absolute URL");
      out.push_back(ref.get<std::string>());
    }
    request.image_refs = std::move(out);
  }
  return request;
}

std::string serialize_request(const VerifyRequest& request) {
  json doc{{"url", request.url}};
  if (request.image_refs) doc["image_refs"] = *request.image_refs;
  return doc.dump();
}

VerifyResponse to_response(const ProfileVerdict& result) {
  return VerifyResponse{wire_name(result.verdict.status), to_string(result.verdict.reason),
                        result.verdict.matched_image, result.profile_id, result.verdict.final_url};
}

VerifyResponse parse_verify_response(std::string_view body) {
  const json doc = parse_object(body);
  reject_unknown(doc, {"status", "reason", "matched_image", "profile_id", "final_url"});
  VerifyResponse response;
  const auto status = optional_string(doc, "status");
  const auto reason = optional_string(doc, "reason");
  if (!status || !status_from_wire(*status)) throw BadRequest("missing or unknown status");
  if (!reason || !reason_from_string(*reason)) throw BadRequest("missing or unknown reason");
  response.status = *status;
  response.reason = *reason;
  response.matched_image = optional_string(doc, "matched_image");
  response.profile_id = optional_string(doc, "profile_id");
  response.final_url = optional_string(doc, "final_url");
  return response;
}

std::string serialize_response(const VerifyResponse& response) {
  json doc{{"status", response.status}, {"reason", response.reason}};
  doc["matched_image"] = response.matched_image ? json(*response.matched_image) : json(nullptr);
  doc["profile_id"] = response.profile_id ? json(*response.profile_id) : json(nullptr);
  doc["final_url"] = response.final_url ? json(*response.final_url) : json(nullptr);
  return doc.dump();
}

HttpReply handle_health() { return HttpReply{200, json{{"status", "ok"}}.dump()}; }

HttpReply handle_profiles(const ProfileSet& profiles) {
  json list = json::array();
  for (const auto& p : profiles.profiles) {
    list.push_back({{"profile_id", p.profile_id}, {"domain_tokens", p.domain_tokens}});
  }
  return HttpReply{200, list.dump()};
}

HttpReply handle_verify(std::string_view body, const ProfileSet& profiles, PageFetcher& fetcher,
                        const FetchOptions& options) {
  VerifyRequest request;
  try {
    request = parse_verify_request(body);
  } catch (const BadRequest& e) {
    return error_reply(400, "bad_request", e.what());
  }
  try {
    const ProfileVerdict result = verify_against_profiles(
        request.url, fetcher, profiles.profiles, options, request.image_refs ? &*request.image_refs : nullptr);
    return HttpReply{200, serialize_response(to_response(result))};
  } catch (const MalformedUrl& e) {
    return error_reply(400, "bad_request", e.what());
  } catch (const FetchError& e) {
    return error_reply(502, "fetch_error", e.what());
  }
}

struct VerificationServer::Impl {
  ProfileSet profiles;
  std::shared_ptr<PageFetcher> fetcher;
  ServerOptions options;
  httplib::Server server;
};

VerificationServer::VerificationServer(ProfileSet profiles, std::shared_ptr<PageFetcher> fetcher,
                                       ServerOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->profiles = std::move(profiles);
  impl_->fetcher = std::move(fetcher);
  impl_->options = std::move(options);

  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  Impl* impl = impl_.get();
  impl->server.Get("/health", [send](const httplib::Request&, httplib::Response& res) { send(res, handle_health()); });
  impl->server.Get("/profiles", [impl, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_profiles(impl->profiles));
  });
  impl->server.Post("/verify", [impl, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_verify(req.body, impl->profiles, *impl->fetcher, impl->options.fetch));
  });
}

VerificationServer::~VerificationServer() { stop(); }

std::uint16_t VerificationServer::bind() {
  const auto& opts = impl_->options;
  if (opts.port == 0) {
    const int port = impl_->server.bind_to_any_port(opts.bind_address);
    if (port <= 0) throw std::runtime_error("cannot bind " + opts.bind_address);
    port_ = static_cast<std::uint16_t>(port);
  } else {
    if (!impl_->server.bind_to_port(opts.bind_address, opts.port))
      throw std::runtime_error("cannot bind " + opts.bind_address + ":" + std::to_string(opts.port));
    port_ = opts.port;
  }
  return port_;
}

void VerificationServer::serve() { impl_->server.listen_after_bind(); }

void VerificationServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace stegoguard
