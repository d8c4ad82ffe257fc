#include "stegoguard/verifier.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <future>
#include <set>

#include "stegoguard/codec.hpp"
#include "stegoguard/stego.hpp"

namespace stegoguard {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool glob_match(std::string_view text, std::string_view pattern) {
  std::size_t t = 0, p = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && pattern[p] != '*' && pattern[p] == text[t]) {
      ++t;
      ++p;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

struct ImageOutcome {
  std::optional<CandidateImage> image;
  std::string skip_reason;
  std::exception_ptr transport_error;
};

ImageOutcome fetch_image(PageFetcher& fetcher, const Url& url, const FetchOptions& options) {
  ImageOutcome out;
  const std::string id = canonical_url(url);
  try {
    const auto doc = fetch_following_redirects(fetcher, url, options);
    if (doc.response.status != 200) {
      out.skip_reason = id + ": HTTP " + std::to_string(doc.response.status);
      return out;
    }
    const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(doc.response.body.data()),
                                              doc.response.body.size());
    out.image = CandidateImage{id, load_image(bytes)};
  } catch (const CodecError& e) {
    out.skip_reason = id + ": " + e.what();
  } catch (const FetchError& e) {
    if (e.code() == FetchErrc::Transport) {
      out.transport_error = std::current_exception();
    } else {
      out.skip_reason = id + ": " + e.what();
    }
  }
  return out;
}

}  // namespace

const char* to_string(VerdictStatus status) noexcept {
  switch (status) {
    case VerdictStatus::Legitimate: return "Legitimate";
    case VerdictStatus::Phished: return "Phished";
    case VerdictStatus::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

const char* to_string(VerdictReason reason) noexcept {
  switch (reason) {
    case VerdictReason::MessageMatch: return "MessageMatch";
    case VerdictReason::NoStegoImage: return "NoStegoImage";
    case VerdictReason::ExtractionMismatch: return "ExtractionMismatch";
    case VerdictReason::TamperDetected: return "TamperDetected";
    case VerdictReason::NotTriggered: return "NotTriggered";
  }
  return "Unknown";
}

const char* wire_name(VerdictStatus status) noexcept {
  switch (status) {
    case VerdictStatus::Legitimate: return "legitimate";
    case VerdictStatus::Phished: return "phished";
    case VerdictStatus::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

std::optional<VerdictStatus> status_from_wire(std::string_view name) noexcept {
  for (auto s : {VerdictStatus::Legitimate, VerdictStatus::Phished, VerdictStatus::NotApplicable}) {
    if (name == wire_name(s)) return s;
  }
  return std::nullopt;
}

std::optional<VerdictReason> reason_from_string(std::string_view name) noexcept {
  for (auto r : {VerdictReason::MessageMatch, VerdictReason::NoStegoImage, VerdictReason::ExtractionMismatch,
                 VerdictReason::TamperDetected, VerdictReason::NotTriggered}) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

Verdict Verdict::legitimate(std::string matched_image) {
  return Verdict{VerdictStatus::Legitimate, VerdictReason::MessageMatch, std::move(matched_image), std::nullopt};
}

Verdict Verdict::phished(VerdictReason reason) {
  return Verdict{VerdictStatus::Phished, reason, std::nullopt, std::nullopt};
}

Verdict Verdict::not_applicable() { return Verdict{}; }

bool Verdict::consistent() const noexcept {
  const bool legit = status == VerdictStatus::Legitimate;
  const bool na = status == VerdictStatus::NotApplicable;
  return legit == (reason == VerdictReason::MessageMatch) && na == (reason == VerdictReason::NotTriggered) &&
         legit == matched_image.has_value();
}

bool host_matches(std::string_view host, const SiteProfile& profile) {
  const std::string h = lower(host);
  return std::any_of(profile.domain_tokens.begin(), profile.domain_tokens.end(),
                     [&](const std::string& token) { return h.find(lower(token)) != std::string::npos; });
}

bool should_trigger(std::string_view url, const SiteProfile& profile) {
  return host_matches(parse_url(url).host, profile);
}

bool matches_hint(std::string_view resource_id, std::string_view hint) {
  if (hint.empty()) return false;
  const std::string id = lower(resource_id);
  const std::string h = lower(hint);
  if (h.find('*') != std::string::npos) return glob_match(id, h);
  return id.find(h) != std::string::npos;
}

std::vector<std::size_t> candidate_order(std::span<const CandidateImage> images, const SiteProfile& profile) {
  std::vector<std::size_t> hinted;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const bool hit = std::any_of(profile.image_hints.begin(), profile.image_hints.end(),
                                 [&](const std::string& hint) { return matches_hint(images[i].resource_id, hint); });
    (hit ? hinted : rest).push_back(i);
  }
  hinted.insert(hinted.end(), rest.begin(), rest.end());
  return hinted;
}

Verdict verify_images(std::span<const CandidateImage> images, const SiteProfile& profile) {
  if (images.empty()) return Verdict::phished(VerdictReason::NoStegoImage);
  bool tampered = false;
  for (std::size_t index : candidate_order(images, profile)) {
    const CandidateImage& candidate = images[index];
    try {
      if (extract(candidate.image, profile.stego_key) == profile.expected_message)
        return Verdict::legitimate(candidate.resource_id);
    } catch (const StegoError& e) {
      if (e.code() == StegoErrc::TamperError) tampered = true;
    }
  }
  return Verdict::phished(tampered ? VerdictReason::TamperDetected : VerdictReason::ExtractionMismatch);
}

PageImages collect_page_images(const Url& url, PageFetcher& fetcher, const FetchOptions& options,
                               const std::vector<std::string>* image_refs) {
  PageImages page{url, {}, {}};
  std::vector<Url> targets;
  std::set<std::string> seen;
  auto add_target = [&](const Url& target) {
    if (target.scheme != "http" && target.scheme != "https") {
      page.skipped.push_back(canonical_url(target) + ": unsupported scheme");
      return;
    }
    if (seen.insert(canonical_url(target)).second) targets.push_back(target);
  };

  if (image_refs) {
    for (const auto& ref : *image_refs) add_target(parse_url(ref));
  } else {
    const auto doc = fetch_following_redirects(fetcher, url, options);
    page.final_url = doc.final_url;
    if (doc.response.status >= 500) {
      throw FetchError(FetchErrc::Transport,
                       "page " + canonical_url(doc.final_url) + " answered HTTP " + std::to_string(doc.response.status));
    }
    if (doc.response.status == 200) {
      for (const auto& src : extract_image_sources(doc.response.body)) {
        if (src.starts_with("data:")) {
          page.skipped.push_back("inline data URI");
          continue;
        }
        try {
          add_target(resolve_url(doc.final_url, src));
        } catch (const MalformedUrl&) {
          page.skipped.push_back(src + ": malformed URL");
        }
      }
    }
  }

  std::vector<std::future<ImageOutcome>> pending;
  pending.reserve(targets.size());
  for (const auto& target : targets) {
    pending.push_back(std::async(std::launch::async, [&fetcher, &options, target] {
      return fetch_image(fetcher, target, options);
    }));
  }
  std::exception_ptr first_error;
  for (auto& f : pending) {
    ImageOutcome outcome = f.get();
    if (outcome.transport_error && !first_error) first_error = outcome.transport_error;
    if (outcome.image) page.images.push_back(std::move(*outcome.image));
    else if (!outcome.skip_reason.empty()) page.skipped.push_back(std::move(outcome.skip_reason));
  }
  if (first_error) std::rethrow_exception(first_error);
  return page;
}

Verdict verify_page(std::string_view url, PageFetcher& fetcher, const SiteProfile& profile,
                    const FetchOptions& options) {
  const Url parsed = parse_url(url);
  if (!host_matches(parsed.host, profile)) return Verdict::not_applicable();
  const PageImages page = collect_page_images(parsed, fetcher, options);
  Verdict verdict = verify_images(page.images, profile);
  verdict.final_url = canonical_url(page.final_url);
  return verdict;
}

ProfileVerdict verify_against_profiles(std::string_view url, PageFetcher& fetcher,
                                       std::span<const SiteProfile> profiles, const FetchOptions& options,
                                       const std::vector<std::string>* image_refs) {
  const Url parsed = parse_url(url);
  std::vector<const SiteProfile*> triggered;
  for (const auto& profile : profiles) {
    if (host_matches(parsed.host, profile)) triggered.push_back(&profile);
  }
  if (triggered.empty()) return ProfileVerdict{Verdict::not_applicable(), std::nullopt};

  const PageImages page = collect_page_images(parsed, fetcher, options, image_refs);
  std::optional<ProfileVerdict> first_failure;
  for (const SiteProfile* profile : triggered) {
    Verdict verdict = verify_images(page.images, *profile);
    verdict.final_url = canonical_url(page.final_url);
    if (verdict.status == VerdictStatus::Legitimate) return ProfileVerdict{std::move(verdict), profile->profile_id};
    if (!first_failure) first_failure = ProfileVerdict{std::move(verdict), profile->profile_id};
  }
  return *first_failure;
}

}  // namespace stegoguard
