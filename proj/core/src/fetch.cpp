#include "stegoguard/fetch.hpp"

#include <fstream>
#include <regex>
#include <sstream>

namespace stegoguard {
namespace {

std::string content_type_for(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".png") return "image/png";
  if (ext == ".bmp") return "image/bmp";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  return "application/octet-stream";
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

void enforce_cap(const FetchResponse& response, const Url& url, const FetchOptions& options) {
  if (response.body.size() > options.max_resource_bytes)
    throw FetchError(FetchErrc::TooLarge, url.to_string() + " exceeds the resource size cap");
}

}  // namespace

std::string canonical_url(const Url& url) {
  Url copy = url;
  copy.fragment.clear();
  return copy.to_string();
}

void MemoryFetcher::add(std::string_view url, FetchResponse response) {
  entries_[canonical_url(parse_url(url))] = std::move(response);
}

void MemoryFetcher::add_redirect(std::string_view from, std::string_view to, int status) {
  add(from, FetchResponse{status, {}, {}, std::string(to)});
}

FetchResponse MemoryFetcher::get(const Url& url, const FetchOptions& options) {
  const auto it = entries_.find(canonical_url(url));
  if (it == entries_.end()) return FetchResponse{404, "not found", "text/plain", {}};
  enforce_cap(it->second, url, options);
  return it->second;
}

DirectoryFetcher::DirectoryFetcher(std::filesystem::path root) : root_(std::move(root)) {}

FetchResponse DirectoryFetcher::get(const Url& url, const FetchOptions& options) {
  if (url.scheme != "http" && url.scheme != "https")
    throw FetchError(FetchErrc::UnsupportedScheme, "unsupported scheme: " + url.scheme);

  std::string site = url.host;
  if (url.port) site += "_" + std::to_string(*url.port);
  std::filesystem::path path = root_ / site;

  std::string rel = url.path;
  if (rel.empty() || rel.back() == '/') rel += "index.html";
  std::stringstream segments(rel);
  for (std::string seg; std::getline(segments, seg, '/');) {
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") return FetchResponse{404, "not found", "text/plain", {}};
    path /= seg;
  }

  auto redirect = path;
  redirect += ".redirect";
  if (std::filesystem::is_regular_file(redirect)) return FetchResponse{302, {}, {}, trim(slurp(redirect))};
  if (!std::filesystem::is_regular_file(path)) return FetchResponse{404, "not found", "text/plain", {}};
  if (std::filesystem::file_size(path) > options.max_resource_bytes)
    throw FetchError(FetchErrc::TooLarge, url.to_string() + " exceeds the resource size cap");
  return FetchResponse{200, slurp(path), content_type_for(path), {}};
}

FetchedDocument fetch_following_redirects(PageFetcher& fetcher, const Url& url, const FetchOptions& options) {
  FetchedDocument doc{url, {}, 0};
  for (;;) {
    doc.response = fetcher.get(doc.final_url, options);
    const int status = doc.response.status;
    const bool redirect = (status == 301 || status == 302 || status == 303 || status == 307 || status == 308) &&
                          !doc.response.location.empty();
    if (!redirect) return doc;
    if (doc.redirects >= options.max_redirects)
      throw FetchError(FetchErrc::TooManyRedirects, "more than " + std::to_string(options.max_redirects) +
                                                        " redirects from " + url.to_string());
    try {
      doc.final_url = resolve_url(doc.final_url, doc.response.location);
    } catch (const MalformedUrl& e) {
      throw FetchError(FetchErrc::Transport, std::string("bad redirect target: ") + e.what());
    }
    ++doc.redirects;
  }
}

std::vector<std::string> extract_image_sources(std::string_view html) {
  static const std::regex img_src(R"re(<img\b[^>]*?\ssrc\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s"'>]+)))re",
                                  std::regex::icase);
  std::vector<std::string> out;
  const std::string text(html);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), img_src); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    std::string src = m[1].matched ? m[1].str() : (m[2].matched ? m[2].str() : m[3].str());
    for (std::size_t pos = 0; (pos = src.find("&amp;", pos)) != std::string::npos; ++pos) src.replace(pos, 5, "&");
    src = trim(std::move(src));
    if (!src.empty()) out.push_back(std::move(src));
  }
  return out;
}

}  // namespace stegoguard
