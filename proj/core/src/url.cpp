#include "stegoguard/url.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace stegoguard {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool valid_host_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '-' || c == '.' || c == '_' || c == '%' || c == '~' || u >= 0x80;
}

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  const bool absolute = !path.empty() && path.front() == '/';
  if (absolute) pos = 1;
  bool trailing_slash = false;
  while (pos <= path.size()) {
    const std::size_t next = path.find('/', pos);
    const std::string_view seg = path.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    const bool last = next == std::string_view::npos;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = true;
    } else if (seg == ".") {
      trailing_slash = true;
    } else {
      out.emplace_back(seg);
      trailing_slash = false;
    }
    if (last) break;
    pos = next + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) result += '/';
    result += out[i];
  }
  if (trailing_slash && !result.empty() && result.back() != '/') result += '/';
  return result.empty() ? "/" : result;
}

void split_tail(std::string_view tail, Url& url) {
  const auto hash = tail.find('#');
  if (hash != std::string_view::npos) {
    url.fragment = std::string(tail.substr(hash + 1));
    tail = tail.substr(0, hash);
  }
  const auto q = tail.find('?');
  if (q != std::string_view::npos) {
    url.query = std::string(tail.substr(q + 1));
    tail = tail.substr(0, q);
  }
  url.path = tail.empty() ? "/" : std::string(tail);
}

}  // namespace

std::uint16_t Url::effective_port() const noexcept {
  if (port) return *port;
  return scheme == "https" ? 443 : 80;
}

std::string Url::origin() const {
  std::string out = scheme + "://" + (host.find(':') != std::string::npos ? "[" + host + "]" : host);
  if (port) out += ":" + std::to_string(*port);
  return out;
}

std::string Url::path_and_query() const { return query.empty() ? path : path + "?" + query; }

std::string Url::to_string() const {
  std::string out = origin() + path_and_query();
  if (!fragment.empty()) out += "#" + fragment;
  return out;
}

Url parse_url(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) throw MalformedUrl("missing scheme");
  const std::string_view scheme = text.substr(0, colon);
  if (!std::isalpha(static_cast<unsigned char>(scheme.front())) ||
      !std::all_of(scheme.begin(), scheme.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
      }))
    throw MalformedUrl("invalid scheme");
  if (text.substr(colon + 1, 2) != "//") throw MalformedUrl("URL is not absolute (missing //)");

  Url url;
  url.scheme = lower(scheme);
  std::string_view rest = text.substr(colon + 3);
  const auto auth_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, auth_end);
  const std::string_view tail = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);

  if (const auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);

  std::string_view host;
  std::string_view port;
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) throw MalformedUrl("unterminated IPv6 literal");
    host = authority.substr(1, close - 1);
    const std::string_view after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') throw MalformedUrl("junk after IPv6 literal");
      port = after.substr(1);
    }
    if (host.empty() || !std::all_of(host.begin(), host.end(), [](char c) {
          return std::isxdigit(static_cast<unsigned char>(c)) || c == ':' || c == '.';
        }))
      throw MalformedUrl("invalid IPv6 literal");
  } else {
    const auto pc = authority.rfind(':');
    host = authority.substr(0, pc);
    if (pc != std::string_view::npos) port = authority.substr(pc + 1);
    if (host.empty()) throw MalformedUrl("empty host");
    if (!std::all_of(host.begin(), host.end(), valid_host_char)) throw MalformedUrl("invalid host character");
  }
  if (!port.empty()) {
    if (port.size() > 5 || !std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw MalformedUrl("invalid port");
    const unsigned long value = std::stoul(std::string(port));
    if (value == 0 || value > 65535) throw MalformedUrl("port out of range");
    url.port = static_cast<std::uint16_t>(value);
  }

  url.host = lower(host);
  while (!url.host.empty() && url.host.back() == '.') url.host.pop_back();
  if (url.host.empty()) throw MalformedUrl("empty host");
  split_tail(tail, url);
  return url;
}

bool is_absolute_url(std::string_view text) noexcept {
  try {
    parse_url(text);
    return true;
  } catch (const MalformedUrl&) {
    return false;
  }
}

Url resolve_url(const Url& base, std::string_view reference) {
  if (is_absolute_url(reference)) return parse_url(reference);
  if (reference.starts_with("//")) return parse_url(base.scheme + ":" + std::string(reference));

  Url out = base;
  out.fragment.clear();
  if (reference.empty()) return out;
  if (reference.front() == '#') {
    out.fragment = std::string(reference.substr(1));
    return out;
  }
  if (reference.front() == '?') {
    Url tmp;
    split_tail(reference, tmp);
    out.query = tmp.query;
    out.fragment = tmp.fragment;
    return out;
  }
  Url tmp;
  split_tail(reference, tmp);
  out.query = tmp.query;
  out.fragment = tmp.fragment;
  if (reference.front() == '/') {
    out.path = remove_dot_segments(tmp.path);
  } else {
    const auto slash = base.path.rfind('/');
    const std::string dir = slash == std::string::npos ? "/" : base.path.substr(0, slash + 1);
    out.path = remove_dot_segments(dir + tmp.path);
  }
  return out;
}

bool is_loopback_host(std::string_view host) noexcept {
  return host == "localhost" || host == "::1" || host.starts_with("127.");
}

}  // namespace stegoguard
