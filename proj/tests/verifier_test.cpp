#include <gtest/gtest.h>

#include <random>

#include "stegoguard/attack_lab.hpp"
#include "stegoguard/codec.hpp"
#include "stegoguard/verifier.hpp"
#include "test_support.hpp"

using namespace stegoguard;

namespace {

struct Fixture {
  PixelImage cover;
  PixelImage stego;
  SiteProfile profile;
};

Fixture make_fixture(std::uint64_t seed, const std::string& message = "SSE Lab") {
  std::mt19937_64 rng(seed);
  PixelImage cover = testsupport::random_image(48, 48, rng);
  auto [stego, key] = embed(cover, SecretMessage(message));
  SiteProfile profile{"bank", {"examplebank"}, SecretMessage(message), key, {"logo"}, {"www.examplebank.test"}, {}};
  return {std::move(cover), std::move(stego), std::move(profile)};
}

FetchResponse png(const PixelImage& img) {
  const auto bytes = encode_png(img);
  return FetchResponse{200, std::string(bytes.begin(), bytes.end()), "image/png", {}};
}

FetchResponse html(const std::string& body) { return FetchResponse{200, body, "text/html", {}}; }

}  // namespace

TEST(Trigger, HostSubstring) {
  const auto f = make_fixture(1);
  EXPECT_TRUE(should_trigger("https://examplebank.test/login", f.profile));
  EXPECT_TRUE(should_trigger("https://examplebank.secure-verify.evil.test/", f.profile));
  EXPECT_FALSE(should_trigger("https://news.unrelated.test/", f.profile));
  EXPECT_THROW(should_trigger("not a url", f.profile), MalformedUrl);
}

TEST(Trigger, HostOnlyAndCaseInsensitive) {
  const auto f = make_fixture(1);
  EXPECT_TRUE(should_trigger("HTTPS://WWW.EXAMPLEBANK.TEST/", f.profile));
  EXPECT_FALSE(should_trigger("https://news.test/examplebank?examplebank=1#examplebank", f.profile));
  EXPECT_FALSE(should_trigger("https://examplebank@evil.test/", f.profile));
}

TEST(Hints, GlobAndSubstring) {
  EXPECT_TRUE(matches_hint("https://bank.test/static/LOGO.png", "logo"));
  EXPECT_TRUE(matches_hint("https://bank.test/static/logo.png", "*/static/*.png"));
  EXPECT_FALSE(matches_hint("https://bank.test/static/logo.bmp", "*/static/*.png"));
  EXPECT_FALSE(matches_hint("https://bank.test/banner.png", "logo"));
}

TEST(CandidateOrder, HintsFirstThenDocumentOrder) {
  const auto f = make_fixture(1);
  const std::vector<CandidateImage> images{{"a.png", f.cover}, {"site-logo.png", f.cover}, {"b.png", f.cover}};
  EXPECT_EQ(candidate_order(images, f.profile), (std::vector<std::size_t>{1, 0, 2}));
}

TEST(VerifyImages, Outcomes) {
  const auto f = make_fixture(2);
  const auto legit = verify_images(std::vector<CandidateImage>{{"logo", f.stego}}, f.profile);
  EXPECT_EQ(legit, Verdict::legitimate("logo"));

  EXPECT_EQ(verify_images({}, f.profile), Verdict::phished(VerdictReason::NoStegoImage));

  const auto swapped = tamper_image(f.stego, ChannelSwap{});
  const auto v = verify_images(std::vector<CandidateImage>{{"logo", swapped}}, f.profile);
  EXPECT_EQ(v.status, VerdictStatus::Phished);
  EXPECT_TRUE(v.reason == VerdictReason::TamperDetected || v.reason == VerdictReason::ExtractionMismatch);
  EXPECT_TRUE(v.consistent());
}

TEST(VerifyImages, TamperedLogoIsPhished) {
  // Flip a quarter of all channel LSBs: the payload pixels cannot all escape.
  const auto f = make_fixture(3);
  const auto noisy = tamper_image(f.stego, LsbNoise{f.stego.pixel_count() * 3 / 4, 7});
  const auto v = verify_images(std::vector<CandidateImage>{{"logo", noisy}}, f.profile);
  EXPECT_EQ(v.status, VerdictStatus::Phished);
}

TEST(VerifyImages, ExtractionMismatchWhenMessageDiffers) {
  // A key for a different message that extracts cleanly from its own stego image.
  auto f = make_fixture(4);
  auto other = make_fixture(4, "Other!!");
  const auto v = verify_images(std::vector<CandidateImage>{{"logo", other.stego}}, f.profile);
  EXPECT_EQ(v.status, VerdictStatus::Phished);
  f.profile.expected_message = SecretMessage("SSE Lbb");
  const auto mismatch = verify_images(std::vector<CandidateImage>{{"logo", f.stego}}, f.profile);
  EXPECT_EQ(mismatch, Verdict::phished(VerdictReason::ExtractionMismatch));
}

TEST(VerifyImages, MatchAnywhereInTheList) {
  const auto f = make_fixture(5);
  const std::vector<CandidateImage> images{{"banner", f.cover}, {"photo", f.cover}, {"footer", f.stego}};
  EXPECT_EQ(verify_images(images, f.profile), Verdict::legitimate("footer"));
}

TEST(VerdictInvariants, Factories) {
  EXPECT_TRUE(Verdict::legitimate("x").consistent());
  EXPECT_TRUE(Verdict::not_applicable().consistent());
  EXPECT_TRUE(Verdict::phished(VerdictReason::NoStegoImage).consistent());
  Verdict broken = Verdict::legitimate("x");
  broken.reason = VerdictReason::NoStegoImage;
  EXPECT_FALSE(broken.consistent());
  EXPECT_STREQ(wire_name(VerdictStatus::NotApplicable), "not_applicable");
  EXPECT_EQ(status_from_wire("phished"), VerdictStatus::Phished);
  EXPECT_EQ(reason_from_string("TamperDetected"), VerdictReason::TamperDetected);
  EXPECT_FALSE(status_from_wire("Phished").has_value());
}

TEST(VerifyPage, FetchedPages) {
  const auto f = make_fixture(6);
  MemoryFetcher web;
  web.add("https://www.examplebank.test/", html(R"(<img src="/img/banner.png"><img src="/img/logo.png">)"));
  web.add("https://www.examplebank.test/img/banner.png", png(f.cover));
  web.add("https://www.examplebank.test/img/logo.png", png(f.stego));
  web.add("https://examplebank.clone.test/", html(R"(<img src="/img/logo.png">)"));
  web.add("https://examplebank.clone.test/img/logo.png", png(f.cover));
  web.add("https://examplebank.empty.test/", html("<form></form>"));

  const auto legit = verify_page("https://www.examplebank.test/", web, f.profile);
  EXPECT_EQ(legit.status, VerdictStatus::Legitimate);
  EXPECT_EQ(legit.matched_image, "https://www.examplebank.test/img/logo.png");
  EXPECT_EQ(legit.final_url, "https://www.examplebank.test/");

  EXPECT_EQ(verify_page("https://examplebank.clone.test/", web, f.profile).status, VerdictStatus::Phished);
  EXPECT_EQ(verify_page("https://examplebank.empty.test/", web, f.profile).reason, VerdictReason::NoStegoImage);
  EXPECT_EQ(verify_page("https://examplebank.missing.test/", web, f.profile).reason, VerdictReason::NoStegoImage);
  EXPECT_EQ(verify_page("https://news.test/", web, f.profile), Verdict::not_applicable());
}

TEST(VerifyPage, SkipsUndecodableAndOversizeImages) {
  const auto f = make_fixture(7);
  MemoryFetcher web;
  web.add("https://www.examplebank.test/", html(R"(<img src="a.jpg"><img src="data:image/png;base64,AAAA">
      <img src="big.png"><img src="gone.png"><img src="logo.png">)"));
  web.add("https://www.examplebank.test/a.jpg", FetchResponse{200, "\xff\xd8\xff\xe0junk", "image/jpeg", {}});
  std::string big(9 << 20, 'x');
  web.add("https://www.examplebank.test/big.png", FetchResponse{200, big, "image/png", {}});
  web.add("https://www.examplebank.test/logo.png", png(f.stego));

  const auto page = collect_page_images(parse_url("https://www.examplebank.test/"), web, {});
  EXPECT_EQ(page.images.size(), 1u);
  EXPECT_EQ(page.skipped.size(), 4u);
  EXPECT_EQ(verify_page("https://www.examplebank.test/", web, f.profile).status, VerdictStatus::Legitimate);
}

TEST(VerifyPage, ServerErrorsSurfaceAsFetchError) {
  const auto f = make_fixture(8);
  MemoryFetcher web;
  web.add("https://www.examplebank.test/", FetchResponse{503, "down", "text/plain", {}});
  EXPECT_THROW(verify_page("https://www.examplebank.test/", web, f.profile), FetchError);
}

TEST(VerifyPage, RedirectRecordsFinalUrl) {
  const auto f = make_fixture(9);
  MemoryFetcher web;
  web.add_redirect("https://examplebank.link.test/go", "https://examplebank.phish.test/login");
  web.add("https://examplebank.phish.test/login", html("<img src=logo.png>"));
  web.add("https://examplebank.phish.test/logo.png", png(f.cover));
  const auto v = verify_page("https://examplebank.link.test/go", web, f.profile);
  EXPECT_EQ(v.status, VerdictStatus::Phished);
  EXPECT_EQ(v.final_url, "https://examplebank.phish.test/login");
}

TEST(VerifyAgainstProfiles, FirstLegitimateWins) {
  const auto a = make_fixture(10);
  auto b = make_fixture(11, "Other bank");
  b.profile.profile_id = "other";
  MemoryFetcher web;
  web.add("https://www.examplebank.test/", html("<img src=logo.png>"));
  web.add("https://www.examplebank.test/logo.png", png(b.stego));
  const std::vector<SiteProfile> profiles{a.profile, b.profile};
  const auto r = verify_against_profiles("https://www.examplebank.test/", web, profiles);
  EXPECT_EQ(r.verdict.status, VerdictStatus::Legitimate);
  EXPECT_EQ(r.profile_id, "other");

  const std::vector<SiteProfile> only_a{a.profile};
  const auto fail = verify_against_profiles("https://www.examplebank.test/", web, only_a);
  EXPECT_EQ(fail.verdict.status, VerdictStatus::Phished);
  EXPECT_EQ(fail.profile_id, "bank");

  const auto none = verify_against_profiles("https://news.test/", web, profiles);
  EXPECT_EQ(none.verdict, Verdict::not_applicable());
  EXPECT_FALSE(none.profile_id.has_value());
}

TEST(VerifyAgainstProfiles, ImageRefsReplacePageEnumeration) {
  const auto f = make_fixture(12);
  MemoryFetcher web;
  web.add("https://cdn.test/logo.png", png(f.stego));
  const std::vector<SiteProfile> profiles{f.profile};
  const std::vector<std::string> refs{"https://cdn.test/logo.png"};
  // The page itself is not served at all; only the listed image is fetched.
  const auto r = verify_against_profiles("https://www.examplebank.test/", web, profiles, {}, &refs);
  EXPECT_EQ(r.verdict.status, VerdictStatus::Legitimate);
}

TEST(Completeness, RandomProfilesAlwaysVerify) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const std::string message = testsupport::random_message(1 + rng() % 24, rng);
    const PixelImage cover = testsupport::random_image(64, 64, rng);
    auto [stego, key] = embed(cover, SecretMessage(message));
    const SiteProfile p{"p", {"bank"}, SecretMessage(message), key, {}, {}, {}};
    EXPECT_EQ(verify_images(std::vector<CandidateImage>{{"x", cover}, {"y", stego}}, p).status,
              VerdictStatus::Legitimate);
  }
}
