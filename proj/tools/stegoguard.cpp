// stegoguard: command-line front end for embedding, extraction, page
// verification, the attack lab and the loopback verification service.
//
// Exit codes: 0 legitimate / success, 2 phished, 3 not applicable, 1 error.

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "stegoguard/attack_lab.hpp"
#include "stegoguard/codec.hpp"
#include "stegoguard/fetch.hpp"
#include "stegoguard/profile.hpp"
#include "stegoguard/service.hpp"
#include "stegoguard/stego.hpp"
#include "stegoguard/verifier.hpp"

namespace fs = std::filesystem;
using namespace stegoguard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPhished = 2;
constexpr int kExitNotApplicable = 3;

int exit_code_for(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Legitimate: return kExitOk;
    case VerdictStatus::Phished: return kExitPhished;
    case VerdictStatus::NotApplicable: return kExitNotApplicable;
  }
  return kExitError;
}

// host=address:port
HttpFetcher::Override parse_resolve(const std::string& entry, std::string& host) {
  const auto eq = entry.find('=');
  const auto colon = entry.rfind(':');
  if (eq == std::string::npos || colon == std::string::npos || colon < eq)
    throw CLI::ValidationError("--resolve", "expected host=address:port, got '" + entry + "'");
  host = entry.substr(0, eq);
  const std::string port_text = entry.substr(colon + 1);
  int port = 0;
  try {
    port = std::stoi(port_text);
  } catch (const std::exception&) {
    port = -1;
  }
  if (port <= 0 || port > 65535) throw CLI::ValidationError("--resolve", "bad port in '" + entry + "'");
  return HttpFetcher::Override{entry.substr(eq + 1, colon - eq - 1), static_cast<std::uint16_t>(port)};
}

std::shared_ptr<PageFetcher> make_fetcher(const std::string& fixtures, const std::vector<std::string>& resolves) {
  if (!fixtures.empty()) return std::make_shared<DirectoryFetcher>(fixtures);
  std::map<std::string, HttpFetcher::Override> table;
  for (const auto& entry : resolves) {
    std::string host;
    auto target = parse_resolve(entry, host);
    table[host] = std::move(target);
  }
  return std::make_shared<HttpFetcher>(std::move(table));
}

void write_text(const fs::path& path, const std::string& text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ProfileSet load_profiles_or_warn(const std::string& dir) {
  ProfileSet set = load_profiles(dir);
  for (const auto& w : set.warnings) std::cerr << "warning: " << w << "\n";
  return set;
}

// ---- subcommands --------------------------------------------------------------

struct EmbedArgs {
  std::string cover, message, out, key_out;
  bool print_key = false;
};

int run_embed(const EmbedArgs& a) {
  const PixelImage cover = read_image_file(a.cover);
  const auto [stego, key] = embed(cover, SecretMessage(a.message));
  write_image_file(a.out, stego);
  if (!a.key_out.empty()) write_text(a.key_out, key.to_decimal() + "\n");
  if (a.print_key) std::cout << key.to_decimal() << "\n";
  return kExitOk;
}

struct ExtractArgs {
  std::string image, key;
};

int run_extract(const ExtractArgs& a) {
  const PixelImage stego = read_image_file(a.image);
  std::cout << extract(stego, StegoKey::from_decimal(a.key)).text() << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string url;
  std::string profiles = "profiles";
  std::string fixtures;
  std::vector<std::string> resolves;
  std::vector<std::string> image_refs;
  bool json = false;
  int timeout_ms = 10'000;
};

int run_verify(const VerifyArgs& a) {
  const ProfileSet set = load_profiles_or_warn(a.profiles);
  auto fetcher = make_fetcher(a.fixtures, a.resolves);
  FetchOptions options;
  options.timeout = std::chrono::milliseconds(a.timeout_ms);
  const ProfileVerdict result = verify_against_profiles(a.url, *fetcher, set.profiles, options,
                                                        a.image_refs.empty() ? nullptr : &a.image_refs);
  const Verdict& v = result.verdict;
  if (a.json) {
    std::cout << serialize_response(to_response(result)) << "\n";
  } else {
    std::cout << wire_name(v.status) << " reason=" << to_string(v.reason)
              << " profile=" << result.profile_id.value_or("-") << " image=" << v.matched_image.value_or("-")
              << " final_url=" << v.final_url.value_or("-") << "\n";
  }
  return exit_code_for(v.status);
}

struct AttackArgs {
  std::string scenario;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t trials = 200;
  std::string message = "Wok";
  int digits = 0;
  std::string space = "table";
};

int run_attack(const AttackArgs& a) {
  std::vector<AttackReport> reports;
  const DemoWorld world = make_demo_world(a.seed);
  const auto& profile = world.profile;
  const auto& s = a.scenario;
  if (s == "table2" || s == "all") {
    reports = s == "all" ? run_all_scenarios(a.seed) : run_scenario_suite(profile, world.fixtures);
  } else if (s == "print-screen") {
    reports.push_back(print_screen_attack(world.stego, profile.expected_message));
  } else if (s == "wrong-key") {
    reports.push_back(wrong_key_trials(world.stego, profile.stego_key, profile.expected_message, a.trials, a.seed));
  } else if (s == "brute-force") {
    const SecretMessage message(a.message);
    const PixelImage stego = embed(synthetic_cover(64, 64, a.seed), message).stego;
    const int digits = a.digits > 0 ? a.digits : static_cast<int>(message.size() * 4);
    const auto space = a.space == "printable" ? KeyPatternSpace::Printable : KeyPatternSpace::TablePattern;
    reports.push_back(brute_force_search(stego, message, digits, space));
  } else if (s == "lsb-noise") {
    reports.push_back(tamper_scenario(world.stego, profile, LsbNoise{50, a.seed}));
  } else if (s == "crop") {
    reports.push_back(tamper_scenario(world.stego, profile, Crop{world.stego.rows() / 2, world.stego.cols() / 2}));
  } else if (s == "copy-attack") {
    const Verdict v = copy_attack_probe(profile, world.fixtures);
    std::cout << "cloned page with the genuine stego image -> " << wire_name(v.status) << " ("
              << to_string(v.reason) << ")\n";
    return kExitOk;
  }
  if (!a.out.empty()) write_text(a.out, reports_to_json(reports));
  std::cout << reports_to_table(reports);
  return kExitOk;
}

struct ServeArgs {
  std::uint16_t port = 8765;
  std::string bind = "127.0.0.1";
  std::string profiles = "profiles";
  std::string fixtures;
  std::vector<std::string> resolves;
};

int run_serve(const ServeArgs& a) {
  ProfileSet set = load_profiles_or_warn(a.profiles);
  if (set.profiles.empty()) {
    std::cerr << "error: no profiles found in " << a.profiles << "\n";
    return kExitError;
  }
  if (!is_loopback_host(a.bind)) std::cerr << "warning: binding a non-loopback address " << a.bind << "\n";

  // Block the stop signals before the server thread exists so only sigwait sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  ServerOptions options;
  options.bind_address = a.bind;
  options.port = a.port;
  VerificationServer server(std::move(set), make_fetcher(a.fixtures, a.resolves), options);
  const std::uint16_t port = server.bind();
  std::cout << "listening on http://" << a.bind << ":" << port << std::endl;

  std::thread worker([&server] { server.serve(); });
  int received = 0;
  sigwait(&stop_signals, &received);
  server.stop();
  worker.join();
  return kExitOk;
}

struct FixturesArgs {
  std::string out;
  std::uint64_t seed = 1;
};

// Writes a demo profile plus one DirectoryFetcher root per scenario page.
int run_fixtures(const FixturesArgs& a) {
  const DemoWorld world = make_demo_world(a.seed);
  const fs::path root = a.out;
  fs::create_directories(root / "profiles");
  write_text(root / "profiles" / (world.profile.profile_id + ".json"), serialize_profile(world.profile) + "\n");
  write_image_file(root / "cover.png", world.cover);
  write_image_file(root / "stego.png", world.stego);

  const FixturePage& legit = *world.fixtures.legit;
  const FixturePage& clone = *world.fixtures.clone;
  FixturePage tampered = legit;
  const std::string logo = parse_url(legit.url).origin() + "/static/logo.png";
  const PixelImage noisy =
      tamper_image(world.stego, LsbNoise{world.stego.rows() * world.stego.cols(), a.seed});
  const auto png = save_image(noisy, ImageFormat::Png).payload;
  tampered.resources[logo] = FetchResponse{200, std::string(png.begin(), png.end()), "image/png", {}};

  export_fixture_page(legit, root / "sites" / "legit");
  export_fixture_page(clone, root / "sites" / "clone");
  export_fixture_page(rehost(clone, parse_url(legit.url).origin()), root / "sites" / "dns-spoof");
  export_fixture_page(tampered, root / "sites" / "tampered");
  export_fixture_page(*world.fixtures.broken, root / "sites" / "broken");

  std::cout << "legit_url " << legit.url << "\n"
            << "clone_url " << clone.url << "\n"
            << "key " << world.profile.stego_key.to_decimal() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steganographic site-authenticity toolkit"};
  app.require_subcommand(1);
  int code = kExitOk;

  EmbedArgs embed_args;
  auto* embed_cmd = app.add_subcommand("embed", "Hide a message in a PNG/BMP cover");
  embed_cmd->add_option("--cover", embed_args.cover, "Cover image (.png or .bmp)")->required()->check(CLI::ExistingFile);
  embed_cmd->add_option("--message", embed_args.message, "Printable ASCII message")->required();
  embed_cmd->add_option("--out", embed_args.out, "Output image; format follows the extension")->required();
  embed_cmd->add_flag("--print-key", embed_args.print_key, "Print the decimal stego key");
  embed_cmd->add_option("--key-out", embed_args.key_out, "Also write the decimal key to this file");
  embed_cmd->callback([&] { code = run_embed(embed_args); });

  ExtractArgs extract_args;
  auto* extract_cmd = app.add_subcommand("extract", "Recover a message with its key");
  extract_cmd->add_option("--image", extract_args.image, "Stego image")->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--key", extract_args.key, "Decimal stego key")->required();
  extract_cmd->callback([&] { code = run_extract(extract_args); });

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Verify a page against the site profiles");
  verify_cmd->add_option("--url", verify_args.url, "Page URL")->required();
  verify_cmd->add_option("--profiles", verify_args.profiles, "Profile directory")->capture_default_str();
  verify_cmd->add_option("--fixtures", verify_args.fixtures, "Serve pages from a fixture directory instead of the network")
      ->check(CLI::ExistingDirectory);
  verify_cmd->add_option("--resolve", verify_args.resolves, "Pin a host: host=address:port (repeatable)");
  verify_cmd->add_option("--image-ref", verify_args.image_refs, "Image URL already known to be on the page (repeatable)");
  verify_cmd->add_option("--timeout-ms", verify_args.timeout_ms, "Per-request timeout")->capture_default_str();
  verify_cmd->add_flag("--json", verify_args.json, "Print the verify response document");
  verify_cmd->callback([&] { code = run_verify(verify_args); });

  int bits = 0;
  auto* keyspace_cmd = app.add_subcommand("keyspace", "Print the keyspace size for a key length in digit positions");
  keyspace_cmd->add_option("--bits", bits, "Key length n (>= 2)")->required();
  keyspace_cmd->callback([&] { std::cout << keyspace_size(bits).str() << "\n"; });

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack", "Run attack-lab scenarios");
  attack_cmd->add_option("scenario", attack_args.scenario, "Scenario to run")
      ->required()
      ->check(CLI::IsMember(
          {"table2", "print-screen", "wrong-key", "brute-force", "lsb-noise", "crop", "copy-attack", "all"}));
  attack_cmd->add_option("--seed", attack_args.seed, "RNG seed")->capture_default_str();
  attack_cmd->add_option("--out", attack_args.out, "Write the JSON report here");
  attack_cmd->add_option("--trials", attack_args.trials, "wrong-key: number of trials")->capture_default_str();
  attack_cmd->add_option("--message", attack_args.message, "brute-force: message to embed")->capture_default_str();
  attack_cmd->add_option("--digits", attack_args.digits, "brute-force: sequence length (default 4 x message length)");
  attack_cmd->add_option("--space", attack_args.space, "brute-force: candidate space")
      ->check(CLI::IsMember({"table", "printable"}))
      ->capture_default_str();
  attack_cmd->callback([&] { code = run_attack(attack_args); });

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Run the loopback verification service");
  serve_cmd->add_option("--port", serve_args.port, "Port, 0 for any free port")->capture_default_str();
  serve_cmd->add_option("--bind", serve_args.bind, "Bind address")->capture_default_str();
  serve_cmd->add_option("--profiles", serve_args.profiles, "Profile directory")->capture_default_str();
  serve_cmd->add_option("--fixtures", serve_args.fixtures, "Serve pages from a fixture directory")
      ->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--resolve", serve_args.resolves, "Pin a host: host=address:port (repeatable)");
  serve_cmd->callback([&] { code = run_serve(serve_args); });

  FixturesArgs fixtures_args;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Write a demo profile and scenario fixture sites");
  fixtures_cmd->add_option("--out", fixtures_args.out, "Output directory")->required();
  fixtures_cmd->add_option("--seed", fixtures_args.seed, "RNG seed")->capture_default_str();
  fixtures_cmd->callback([&] { code = run_fixtures(fixtures_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}
