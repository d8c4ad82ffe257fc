#include <gtest/gtest.h>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <random>

#include <httplib.h>
#include <json.hpp>

#include "stegoguard/codec.hpp"
#include "stegoguard/stego.hpp"
#include "test_support.hpp"

using namespace stegoguard;
using testsupport::quote;
using testsupport::run_command;

namespace {

const std::string kCli = STEGOGUARD_CLI_PATH;

std::string cli(const std::string& args) { return quote(kCli) + " " + args + " 2>/dev/null"; }

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

class Cli : public ::testing::Test {
 protected:
  testsupport::TempDir dir_;
};

}  // namespace

TEST_F(Cli, EmbedExtractMatchesInMemory) {
  std::mt19937_64 rng(4);
  const PixelImage cover = testsupport::random_image(40, 40, rng);
  write_image_file(dir_ / "cover.png", cover);
  const std::string message = "Meet at 10, gate B";

  for (const char* out : {"stego.png", "stego.bmp"}) {
    const auto embed_run = run_command(cli("embed --cover " + quote(dir_ / "cover.png") + " --message " +
                                           quote(message) + " --out " + quote(dir_ / out) + " --print-key"));
    ASSERT_EQ(embed_run.exit_code, 0);
    const auto mem = embed(cover, SecretMessage(message));
    EXPECT_EQ(trim(embed_run.out), mem.key.to_decimal());
    EXPECT_EQ(read_image_file(dir_ / out), mem.stego);

    const auto extract_run =
        run_command(cli("extract --image " + quote(dir_ / out) + " --key " + trim(embed_run.out)));
    EXPECT_EQ(extract_run.exit_code, 0);
    EXPECT_EQ(trim(extract_run.out), message);
  }
}

TEST_F(Cli, EmbedWritesKeyFileAndRejectsBadInput) {
  write_image_file(dir_ / "cover.bmp", PixelImage(16, 16, Rgb{90, 60, 30}));
  const auto ok = run_command(cli("embed --cover " + quote(dir_ / "cover.bmp") + " --message hi --out " +
                                  quote(dir_ / "s.png") + " --key-out " + quote(dir_ / "key.txt")));
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_TRUE(ok.out.empty());
  std::string key;
  std::ifstream(dir_ / "key.txt") >> key;
  EXPECT_EQ(key, embed(PixelImage(16, 16, Rgb{90, 60, 30}), SecretMessage("hi")).key.to_decimal());

  EXPECT_EQ(run_command(cli("embed --cover " + quote(dir_ / "cover.bmp") + " --message '' --out " +
                            quote(dir_ / "x.png")))
                .exit_code,
            1);
  EXPECT_EQ(run_command(cli("embed --cover " + quote(dir_ / "cover.bmp") + " --message hi --out " +
                            quote(dir_ / "x.jpg")))
                .exit_code,
            1);
  EXPECT_EQ(run_command(cli("embed --cover " + quote(dir_ / "none.png") + " --message hi --out " +
                            quote(dir_ / "x.png")))
                .exit_code,
            1);
}

TEST_F(Cli, ExtractErrors) {
  const auto [stego, key] = embed(PixelImage(8, 8, Rgb{128, 128, 128}), SecretMessage("A"));
  write_image_file(dir_ / "s.png", stego);
  EXPECT_EQ(run_command(cli("extract --image " + quote(dir_ / "s.png") + " --key 1041")).exit_code, 1);
  EXPECT_EQ(run_command(cli("extract --image " + quote(dir_ / "s.png") + " --key abc")).exit_code, 1);
  EXPECT_EQ(trim(run_command(cli("extract --image " + quote(dir_ / "s.png") + " --key " + key.to_decimal())).out),
            "A");
}

TEST_F(Cli, Keyspace) {
  const auto r = run_command(cli("keyspace --bits 40"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(trim(r.out), "2701703435345984178");
  EXPECT_EQ(run_command(cli("keyspace --bits 1")).exit_code, 1);
  EXPECT_EQ(run_command(cli("keyspace")).exit_code, 1);
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run_command(cli("")).exit_code, 1);
  EXPECT_EQ(run_command(cli("frobnicate")).exit_code, 1);
  EXPECT_EQ(run_command(cli("attack nonsense")).exit_code, 1);
  EXPECT_EQ(run_command(cli("--help")).exit_code, 0);
}

TEST_F(Cli, VerifyExitCodes) {
  ASSERT_EQ(run_command(cli("fixtures --out " + quote(dir_.path()))).exit_code, 0);
  const std::string profiles = " --profiles " + quote(dir_ / "profiles");
  auto verify = [&](const std::string& site, const std::string& url, const std::string& extra = "") {
    return run_command(cli("verify --url " + url + profiles + " --fixtures " + quote(dir_ / "sites" / site) + extra));
  };
  const std::string legit_url = "https://www.examplebank.test/login";
  EXPECT_EQ(verify("legit", legit_url).exit_code, 0);
  EXPECT_EQ(verify("dns-spoof", legit_url).exit_code, 2);
  EXPECT_EQ(verify("tampered", legit_url).exit_code, 2);
  EXPECT_EQ(verify("clone", "https://examplebank.secure-login.test/login").exit_code, 2);
  EXPECT_EQ(verify("legit", "https://news.example.test/").exit_code, 3);
  EXPECT_EQ(verify("legit", "'not a url'").exit_code, 1);

  const auto json_run = verify("legit", legit_url, " --json");
  const auto doc = nlohmann::json::parse(json_run.out);
  EXPECT_EQ(doc.at("status"), "legitimate");
  EXPECT_EQ(doc.at("profile_id"), "examplebank");

  EXPECT_EQ(run_command(cli("verify --url " + legit_url + " --profiles " + quote(dir_ / "nope") + " --fixtures " +
                            quote(dir_ / "sites" / "legit")))
                .exit_code,
            1);
}

TEST_F(Cli, AttackTable2WritesJson) {
  const auto r = run_command(cli("attack table2 --seed 1 --out " + quote(dir_ / "r.json")));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("PageLoadBroken"), std::string::npos);
  std::ifstream in(dir_ / "r.json");
  const auto doc = nlohmann::json::parse(in);
  ASSERT_EQ(doc.size(), 5u);
  std::vector<std::string> outcomes;
  for (const auto& rec : doc) outcomes.push_back(rec.at("outcome"));
  EXPECT_EQ(outcomes, (std::vector<std::string>{"NotResisted", "Resisted", "Resisted", "Resisted", "Resisted"}));
  EXPECT_EQ(run_command(cli("attack table2 --seed 1")).out, r.out);
}

TEST_F(Cli, AttackBruteForceRefusesHugeSpace) {
  EXPECT_EQ(run_command(cli("attack brute-force --message 'SSE Lab' --digits 28")).exit_code, 1);
}

TEST_F(Cli, ServeAnswersHealthAndStopsOnSigterm) {
  ASSERT_EQ(run_command(cli("fixtures --out " + quote(dir_.path()))).exit_code, 0);
  int out_pipe[2];
  ASSERT_EQ(::pipe(out_pipe), 0);
  const std::string profiles = (dir_ / "profiles").string();
  const pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(out_pipe[0]);
    ::execl(kCli.c_str(), kCli.c_str(), "serve", "--port", "0", "--profiles", profiles.c_str(), nullptr);
    ::_exit(127);
  }
  ::close(out_pipe[1]);
  std::string line;
  char c = 0;
  while (::read(out_pipe[0], &c, 1) == 1 && c != '\n') line += c;
  ::close(out_pipe[0]);

  const auto colon = line.rfind(':');
  ASSERT_NE(colon, std::string::npos) << line;
  const int port = std::stoi(line.substr(colon + 1));
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  auto untriggered = client.Post("/verify", R"({"url":"https://news.test/"})", "application/json");
  ASSERT_TRUE(untriggered);
  EXPECT_EQ(nlohmann::json::parse(untriggered->body).at("status"), "not_applicable");

  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}
