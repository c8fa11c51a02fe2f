#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "humanoid/cli.hpp"
#include "support.hpp"

using namespace humanoid;
using namespace humanoid::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "humanoid");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string world(const std::string& stem) { return (default_data_root() / "worlds" / (stem + ".yaml")).string(); }
std::string fixture(const std::string& name) { return (test_dir() / "fixtures" / "metrics" / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("simulate writes timeline, event log and summary") {
  const auto dir = temp_dir("cli_simulate");
  const auto r = cli({"simulate", "--world", world("lins_family"), "--out", dir.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"timeline.json", "events.log", "summary.txt"}) CHECK(fs::exists(dir / f));
  const auto t = nlohmann::json::parse(slurp(dir / "timeline.json"));
  CHECK(t["records"].size() == 144);
  CHECK(t["header"]["agents"].size() == 2);
  CHECK(t["status"] == "complete");
  CHECK(slurp(dir / "summary.txt").find("activity records: 288") != std::string::npos);
}

TEST_CASE("identical flags give byte-identical outputs") {
  const auto a = temp_dir("cli_det_a"), b = temp_dir("cli_det_b");
  REQUIRE(cli({"simulate", "--world", world("friends"), "--seed", "3", "--out", a.string()}).code == 0);
  REQUIRE(cli({"simulate", "--world", world("friends"), "--seed", "3", "--out", b.string()}).code == 0);
  for (const char* f : {"timeline.json", "events.log", "summary.txt"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("exit codes") {
  const auto dir = temp_dir("cli_codes");
  CHECK(cli({"simulate", "--world", "/nonexistent.yaml", "--out", dir.string()}).code == kExitConfig);
  CHECK(cli({"simulate", "--world", world("friends"), "--bogus"}).code == kExitConfig);
  CHECK(cli({"simulate", "--world", world("friends"), "--decay-mode", "sometimes"}).code == kExitConfig);
  CHECK(cli({"simulate", "--world", world("friends"), "--rules", "/nonexistent.json"}).code == kExitConfig);
  CHECK(cli({"simulate", "--world", world("friends"), "--out", "/dev/null/out"}).code == kExitIo);
  CHECK(cli({"metrics", "kappa", "--input", "/nonexistent.csv"}).code == kExitIo);
  CHECK(cli({"metrics", "f1", "--input", fixture("votes.csv")}).code == kExitConfig);
  CHECK(cli({}).code == kExitConfig);
}

TEST_CASE("the llm provider without an API key fails before simulating") {
  ::unsetenv("HUMANOID_API_KEY");
  const auto dir = temp_dir("cli_llm") / "out";
  const auto r = cli({"simulate", "--world", world("lins_family"), "--provider", "llm", "--out", dir.string()});
  CHECK(r.code == kExitProvider);
  CHECK(r.err.find("HUMANOID_API_KEY") != std::string::npos);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("help documents every flag") {
  const auto r = cli({"simulate", "--help"});
  CHECK(r.code == 0);
  for (const char* flag : {"--world", "--days", "--seed", "--provider", "--prompts", "--out", "--decay-mode",
                           "--rules", "--lenient"}) {
    CHECK_MESSAGE(r.out.find(flag) != std::string::npos, flag);
  }
  for (const char* cmd : {"experiment needs", "metrics kappa", "export"}) {
    std::vector<std::string> args;
    std::istringstream words(cmd);
    for (std::string w; words >> w;) args.push_back(w);
    args.push_back("--help");
    CHECK(cli(args).code == 0);
  }
}

TEST_CASE("a config file supplies option values") {
  const auto dir = temp_dir("cli_config");
  std::ofstream(dir / "run.toml") << "[simulate]\ndays = 1\nseed = 2\n";
  const auto r = cli({"--config", (dir / "run.toml").string(), "simulate", "--world", world("lins_family"), "--out",
                      (dir / "out").string()});
  REQUIRE(r.code == 0);
  const auto t = nlohmann::json::parse(slurp(dir / "out" / "timeline.json"));
  CHECK(t["header"]["num_days"] == 1);
  CHECK(t["header"]["seed"] == 2);
}

TEST_CASE("metrics commands") {
  CHECK(cli({"metrics", "kappa", "--input", fixture("unanimous_labels.csv")}).out == "1.0\n");
  const auto k = cli({"metrics", "kappa", "--counts", "--input", fixture("counts.csv")});
  CHECK(std::stod(k.out) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(cli({"metrics", "f1", "--input", fixture("predictions.csv")}).out == "0.75\n");
  CHECK(cli({"metrics", "vote", "--input", fixture("votes.csv")}).out == "yes\nno\nhappy\n");
}

TEST_CASE("experiment needs prints a positive change per agent") {
  const auto dir = temp_dir("cli_needs");
  const auto r = cli({"experiment", "needs", "--need", "health", "--world", world("lins_family"), "--format", "csv",
                      "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("need,EL,JL,mean\nhealth,", 0) == 0);
  const auto row = r.out.substr(r.out.find("health,") + 7);
  std::istringstream cells(row);
  for (std::string cell; std::getline(cells, cell, ',');) CHECK(std::stod(cell) > 0.0);
  CHECK(fs::exists(dir / "needs.csv"));
  CHECK(fs::exists(dir / "needs.txt"));
}

TEST_CASE("export produces one CSV row per agent-step") {
  const auto dir = temp_dir("cli_export");
  REQUIRE(cli({"simulate", "--world", world("big_bang_theory"), "--days", "1", "--out", dir.string()}).code == 0);
  const auto r = cli({"export", "--timeline", (dir / "timeline.json").string(), "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 3 * 72);
  const auto j = cli({"export", "--timeline", (dir / "timeline.json").string(), "--format", "json", "--output",
                      (dir / "copy.json").string()});
  REQUIRE(j.code == 0);
  CHECK(slurp(dir / "copy.json") == slurp(dir / "timeline.json"));
  std::ofstream(dir / "bad.json") << "{";
  CHECK(cli({"export", "--timeline", (dir / "bad.json").string()}).code == kExitConfig);
}
