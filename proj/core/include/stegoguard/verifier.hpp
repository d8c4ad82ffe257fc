#pragma once

// Site verification: a URL whose host contains one of a profile's domain
// tokens triggers a check; the page's images are searched for the profile's
// stego image and the outcome is folded into a single verdict.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stegoguard/fetch.hpp"
#include "stegoguard/image.hpp"
#include "stegoguard/profile.hpp"

namespace stegoguard {

enum class VerdictStatus { Legitimate, Phished, NotApplicable };
enum class VerdictReason { MessageMatch, NoStegoImage, ExtractionMismatch, TamperDetected, NotTriggered };

const char* to_string(VerdictStatus status) noexcept;
const char* to_string(VerdictReason reason) noexcept;
/// Lowercase wire names: "legitimate", "phished", "not_applicable".
const char* wire_name(VerdictStatus status) noexcept;
std::optional<VerdictStatus> status_from_wire(std::string_view name) noexcept;
std::optional<VerdictReason> reason_from_string(std::string_view name) noexcept;

struct Verdict {
  VerdictStatus status = VerdictStatus::NotApplicable;
  VerdictReason reason = VerdictReason::NotTriggered;
  std::optional<std::string> matched_image;
  std::optional<std::string> final_url;  // page URL after redirects, when a page was fetched

  static Verdict legitimate(std::string matched_image);
  static Verdict phished(VerdictReason reason);
  static Verdict not_applicable();

  /// Legitimate <=> MessageMatch and NotApplicable <=> NotTriggered.
  bool consistent() const noexcept;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct CandidateImage {
  std::string resource_id;
  PixelImage image;
};

/// True iff a domain token occurs (case-insensitively) in the URL's host.
/// Throws MalformedUrl.
bool should_trigger(std::string_view url, const SiteProfile& profile);
bool host_matches(std::string_view host, const SiteProfile& profile);

/// Hint matching: a hint containing '*' is a glob over the whole resource
/// id, any other hint is a case-insensitive substring.
bool matches_hint(std::string_view resource_id, std::string_view hint);

/// Indices of `images`: hinted candidates first, then the rest, each group in
/// document order.
std::vector<std::size_t> candidate_order(std::span<const CandidateImage> images, const SiteProfile& profile);

Verdict verify_images(std::span<const CandidateImage> images, const SiteProfile& profile);

struct PageImages {
  Url final_url;
  std::vector<CandidateImage> images;
  std::vector<std::string> skipped;  // "url: reason" for images that could not be used
};

/// Fetches `image_refs` when given, otherwise the page and every <img> in it.
/// Images are fetched concurrently; 4xx/5xx answers, oversize bodies and
/// undecodable data are skipped. Transport failures throw FetchError.
PageImages collect_page_images(const Url& url, PageFetcher& fetcher, const FetchOptions& options,
                               const std::vector<std::string>* image_refs = nullptr);

Verdict verify_page(std::string_view url, PageFetcher& fetcher, const SiteProfile& profile,
                    const FetchOptions& options = {});

struct ProfileVerdict {
  Verdict verdict;
  std::optional<std::string> profile_id;
};

/// Runs every profile whose tokens match the URL against one fetch of the
/// page. The first Legitimate result wins; otherwise the first matching
/// profile's Phished verdict is reported.
ProfileVerdict verify_against_profiles(std::string_view url, PageFetcher& fetcher,
                                       std::span<const SiteProfile> profiles, const FetchOptions& options = {},
                                       const std::vector<std::string>* image_refs = nullptr);

}  // namespace stegoguard
