#include <algorithm>
#include <memory>
#include <random>

#include "stegoguard/attack_lab.hpp"
#include "stegoguard/codec.hpp"

namespace stegoguard {
namespace {

constexpr std::string_view kLegitOrigin = "https://www.examplebank.test";
constexpr std::string_view kCloneOrigin = "https://examplebank.secure-login.test";

constexpr std::string_view kLoginHtml = R"(<!doctype html>
<html>
<head><title>Example Bank - Sign in</title></head>
<body>
<img src="/static/banner.png" alt="Welcome">
<img src="/static/logo.png" alt="Example Bank">
<form action="/session" method="post">
  <input name="user" autocomplete="username">
  <input type="password" name="password">
  <button type="submit">Sign in</button>
</form>
</body>
</html>
)";

FetchResponse png_response(const PixelImage& image) {
  const auto file = save_image(image, ImageFormat::Png);
  return FetchResponse{200, std::string(file.payload.begin(), file.payload.end()), "image/png", {}};
}

FetchResponse html_response(std::string_view html) { return FetchResponse{200, std::string(html), "text/html", {}}; }

const FixturePage& require(const std::optional<FixturePage>& page, const char* name) {
  if (!page) throw AttackLabError(AttackErrc::FixtureMissing, std::string("missing fixture page: ") + name);
  return *page;
}

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
  if (from.empty()) return text;
  for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size())
    text.replace(pos, from.size(), to);
  return text;
}

std::shared_ptr<MemoryFetcher> fetcher_for(std::initializer_list<const FixturePage*> pages) {
  auto fetcher = std::make_shared<MemoryFetcher>();
  for (const FixturePage* page : pages) {
    for (const auto& [url, response] : page->resources) fetcher->add(url, response);
  }
  return fetcher;
}

std::string verdict_text(const Verdict& v) {
  std::string out = std::string(to_string(v.status)) + "/" + to_string(v.reason);
  if (v.final_url) out += " final_url=" + *v.final_url;
  return out;
}

Outcome expect(const Verdict& v, VerdictStatus wanted) {
  return v.status == wanted ? Outcome::Resisted : Outcome::NotResisted;
}

}  // namespace

PixelImage synthetic_cover(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> noise(-12, 12);
  PixelImage img(rows, cols);
  for (std::size_t y = 0; y < rows; ++y) {
    for (std::size_t x = 0; x < cols; ++x) {
      const int base_r = 40 + static_cast<int>(160 * x / std::max<std::size_t>(cols, 1));
      const int base_g = 60 + static_cast<int>(140 * y / std::max<std::size_t>(rows, 1));
      const int base_b = 180 - static_cast<int>(100 * (x + y) / std::max<std::size_t>(rows + cols, 1));
      auto clamp = [](int v) { return static_cast<std::uint8_t>(std::clamp(v, 16, 239)); };
      img.at(y, x) = Rgb{clamp(base_r + noise(rng)), clamp(base_g + noise(rng)), clamp(base_b + noise(rng))};
    }
  }
  return img;
}

FixturePage rehost(const FixturePage& page, std::string_view new_origin) {
  const std::string old_origin = parse_url(page.url).origin();
  const std::string origin = parse_url(std::string(new_origin) + "/").origin();
  FixturePage out;
  out.url = replace_all(page.url, old_origin, origin);
  for (const auto& [url, response] : page.resources) {
    FetchResponse copy = response;
    if (copy.content_type.starts_with("text/")) copy.body = replace_all(copy.body, old_origin, origin);
    copy.location = replace_all(copy.location, old_origin, origin);
    out.resources.emplace(replace_all(url, old_origin, origin), std::move(copy));
  }
  return out;
}

Verdict verify_fixture(const FixturePage& page, const SiteProfile& profile) {
  auto fetcher = fetcher_for({&page});
  return verify_page(page.url, *fetcher, profile);
}

void export_fixture_page(const FixturePage& page, const std::filesystem::path& root) {
  for (const auto& [url_text, response] : page.resources) {
    const Url url = parse_url(url_text);
    std::string site = url.host;
    if (url.port) site += "_" + std::to_string(*url.port);
    std::string rel = url.path;
    if (rel.empty() || rel.back() == '/') rel += "index.html";
    std::filesystem::path path = root / site / std::filesystem::path(rel).relative_path();
    std::filesystem::create_directories(path.parent_path());
    if (response.status >= 300 && response.status < 400) {
      path += ".redirect";
      const std::string body = response.location + "\n";
      write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
    } else if (response.status == 200) {
      write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(response.body.data()), response.body.size()));
    }
  }
}

std::vector<AttackReport> run_scenario_suite(const SiteProfile& profile, const ScenarioFixtures& fixtures) {
  const FixturePage& legit = require(fixtures.legit, "legit");
  const FixturePage& clone = require(fixtures.clone, "clone");
  const FixturePage& broken = require(fixtures.broken, "broken");
  const std::string token = profile.domain_tokens.front();

  std::vector<AttackReport> reports;

  {
    const Verdict v = verify_fixture(broken, profile);
    reports.push_back({Scenario::PageLoadBroken, expect(v, VerdictStatus::Legitimate),
                       "genuine page whose stego image failed to load -> " + verdict_text(v)});
  }
  {
    const FixturePage fresh = rehost(clone, "https://" + token + "-account-update.zero-day.test");
    const Verdict v = verify_fixture(fresh, profile);
    reports.push_back({Scenario::BlacklistIndependence, expect(v, VerdictStatus::Phished),
                       "never-listed clone host, no list database consulted -> " + verdict_text(v)});
  }
  {
    const FixturePage mirror = rehost(legit, "https://mirror." + token + ".unlisted.test");
    const std::string host = parse_url(mirror.url).host;
    const bool listed = std::find(profile.legit_hosts.begin(), profile.legit_hosts.end(), host) !=
                        profile.legit_hosts.end();
    const Verdict v = verify_fixture(mirror, profile);
    reports.push_back({Scenario::WhitelistIndependence, expect(v, VerdictStatus::Legitimate),
                       "genuine content on host " + host + (listed ? " (listed)" : " (not in legit_hosts)") + " -> " +
                           verdict_text(v)});
  }
  {
    const FixturePage landing = rehost(clone, "https://" + token + "-secure.phish-cdn.test");
    const std::string entry = "https://" + token + ".redirect.test/login";
    auto fetcher = fetcher_for({&landing});
    fetcher->add_redirect(entry, landing.url);
    const Verdict v = verify_page(entry, *fetcher, profile);
    reports.push_back({Scenario::Redirection, expect(v, VerdictStatus::Phished),
                       "redirect from " + entry + " to another origin -> " + verdict_text(v)});
  }
  {
    const FixturePage spoofed = rehost(clone, parse_url(legit.url).origin());
    const Verdict v = verify_fixture(spoofed, profile);
    reports.push_back({Scenario::DnsSpoof, expect(v, VerdictStatus::Phished),
                       "clone served under the genuine URL " + spoofed.url + " -> " + verdict_text(v)});
  }
  return reports;
}

Verdict copy_attack_probe(const SiteProfile& profile, const ScenarioFixtures& fixtures) {
  const FixturePage& legit = require(fixtures.legit, "legit");
  const FixturePage& clone = require(fixtures.clone, "clone");
  return verify_fixture(rehost(legit, parse_url(clone.url).origin()), profile);
}

DemoWorld make_demo_world(std::uint64_t seed, std::string_view message) {
  const SecretMessage secret(message);
  PixelImage cover = synthetic_cover(64, 64, seed);
  auto [stego, key] = embed(cover, secret);

  SiteProfile profile{"examplebank", {"examplebank"}, secret, key, {"logo"}, {"www.examplebank.test"},
                      ImageSize{cover.rows(), cover.cols()}};

  const PixelImage banner = synthetic_cover(16, 64, seed ^ 0x9E3779B97F4A7C15ULL);
  const std::string legit_url = std::string(kLegitOrigin) + "/login";
  const std::string clone_url = std::string(kCloneOrigin) + "/login";

  FixturePage legit{legit_url, {}};
  legit.resources.emplace(legit_url, html_response(kLoginHtml));
  legit.resources.emplace(std::string(kLegitOrigin) + "/static/banner.png", png_response(banner));
  legit.resources.emplace(std::string(kLegitOrigin) + "/static/logo.png", png_response(stego));

  // The clone redraws the logo: visually the same, but without the embedding.
  FixturePage clone{clone_url, {}};
  clone.resources.emplace(clone_url, html_response(kLoginHtml));
  clone.resources.emplace(std::string(kCloneOrigin) + "/static/banner.png", png_response(banner));
  clone.resources.emplace(std::string(kCloneOrigin) + "/static/logo.png", png_response(cover));

  FixturePage broken = legit;
  broken.resources.erase(std::string(kLegitOrigin) + "/static/logo.png");

  ScenarioFixtures fixtures{std::move(legit), std::move(clone), std::move(broken)};
  return DemoWorld{std::move(profile), std::move(cover), std::move(stego), std::move(fixtures)};
}

std::vector<AttackReport> run_all_scenarios(std::uint64_t seed) {
  const DemoWorld world = make_demo_world(seed);
  std::vector<AttackReport> reports = run_scenario_suite(world.profile, world.fixtures);
  reports.push_back(print_screen_attack(world.stego, world.profile.expected_message));
  reports.push_back(wrong_key_trials(world.stego, world.profile.stego_key, world.profile.expected_message, 200, seed));
  reports.push_back(brute_force_assessment(world.stego, world.profile.expected_message));
  reports.push_back(tamper_scenario(world.stego, world.profile, LsbNoise{50, seed}));
  reports.push_back(tamper_scenario(world.stego, world.profile, Crop{world.stego.rows() / 2, world.stego.cols() / 2}));
  return reports;
}

}  // namespace stegoguard
