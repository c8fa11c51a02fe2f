#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace humanoid;
using humanoid::testing::bundled_world;
using humanoid::testing::test_dir;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string valid_yaml() {
  // Any invalid fixture minus its one defect is the valid base; rebuild it here.
  return R"(world_name: Tiny
locations:
  - name: House
  - name: Kitchen
    contained_in: House
agents:
  - name: Ann Lee
    age: 30
    description: [Ann Lee lives in the house.]
    example_day_plan: "06:00 wake up"
  - name: Bo Lee
    age: 31
    description: [Bo Lee lives in the house.]
    example_day_plan: "06:00 wake up"
)";
}

}  // namespace

TEST_CASE("bundled worlds load under strict mode") {
  for (const auto& path : bundled_world_paths()) {
    CAPTURE(path);
    CHECK_NOTHROW(load_world(path, LoadOptions{true}));
  }
}

TEST_CASE("bundled world contents") {
  const auto lins = bundled_world("lins_family");
  CHECK(lins.agents.size() == 2);
  CHECK(lins.initial_closeness("John Lin", "Eddy Lin") == 5);
  CHECK(lins.step_minutes == 15);
  CHECK(lins.frame().steps() == 72);

  const auto bbt = bundled_world("big_bang_theory");
  CHECK(bbt.agents.size() == 3);
  CHECK(bbt.initial_closeness("Leonard Hofstadter", "Penny") == 3);
  CHECK(bbt.initial_closeness("Penny", "Leonard Hofstadter") == 2);
  CHECK(bbt.initial_closeness("Sheldon Cooper", "Penny") == 1);
  CHECK(bbt.initial_closeness("Penny", "Sheldon Cooper") == 1);
  CHECK(bbt.root_of("Caltech Physics Lab") == "Caltech");

  const auto friends = bundled_world("friends");
  CHECK(friends.agents.size() == 3);
}

TEST_CASE("defaults when fields are omitted") {
  const auto w = parse_world(valid_yaml());
  CHECK(w.day_start == TimeOfDay::hm(6, 0));
  CHECK(w.day_end == TimeOfDay::hm(24, 0));
  CHECK(w.decay == DecayConfig{});
  CHECK(w.agents[0].initial_emotion == Emotion::Neutral);
  CHECK(w.agents[0].initial_needs == BasicNeeds{});
  CHECK(w.initial_closeness("Ann Lee", "Bo Lee") == kDefaultCloseness);
}

TEST_CASE("each crafted invalid world is rejected with a field-path diagnostic") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(test_dir() / "fixtures" / "invalid_worlds")) {
    const auto text = read(entry.path());
    const std::string marker = "# expect: ";
    REQUIRE(text.rfind(marker, 0) == 0);
    const auto expected = text.substr(marker.size(), text.find('\n') - marker.size());
    CAPTURE(entry.path().filename());
    try {
      parse_world(text);
      FAIL("accepted an invalid world");
    } catch (const WorldConfigError& e) {
      bool found = false;
      for (const auto& d : e.diagnostics()) {
        found = found || d.path == expected;
        CHECK(d.line > 0);
      }
      CHECK_MESSAGE(found, e.what());
    }
    ++count;
  }
  CHECK(count == 12);
}

TEST_CASE("unknown fields fail in strict mode and warn in lenient mode") {
  const auto text = valid_yaml() + "favourite_colour: blue\n";
  try {
    parse_world(text);
    FAIL("strict mode accepted an unknown field");
  } catch (const WorldConfigError& e) {
    CHECK(e.diagnostics().at(0).path == "favourite_colour");
  }
  CHECK_NOTHROW(parse_world(text, LoadOptions{false}));
}

TEST_CASE("type errors and YAML syntax errors are diagnostics") {
  CHECK_THROWS_AS(parse_world("world_name: [unclosed"), WorldConfigError);
  std::string text = valid_yaml();
  text.replace(text.find("age: 30"), 7, "age: thirty");
  try {
    parse_world(text);
    FAIL("accepted a non-integer age");
  } catch (const WorldConfigError& e) {
    CHECK(e.diagnostics().at(0).path == "agents[0].age");
  }
  text = valid_yaml();
  text.replace(text.find("world_name: Tiny\n"), 17, "world_name: Tiny\ndecay:\n  mode: sometimes\n");
  CHECK_THROWS_AS(parse_world(text), WorldConfigError);
}

TEST_CASE("every problem is reported, not just the first") {
  std::string text = valid_yaml();
  text.replace(text.find("age: 30"), 7, "age: 300");
  text.replace(text.find("age: 31"), 7, "age: -1");
  try {
    parse_world(text);
    FAIL("accepted");
  } catch (const WorldConfigError& e) {
    CHECK(e.diagnostics().size() == 2);
  }
}

TEST_CASE("a missing world file is a configuration error") {
  CHECK_THROWS_AS(load_world("/nonexistent/world.yaml"), WorldConfigError);
}

TEST_CASE("set_all_closeness overrides every seed symmetrically") {
  auto w = bundled_world("big_bang_theory");
  w.set_all_closeness(15);
  for (const auto& a : w.agents) {
    for (const auto& b : w.agents) {
      if (a.profile.name != b.profile.name) CHECK(w.initial_closeness(a.profile.name, b.profile.name) == 15);
    }
  }
  CHECK_NOTHROW(validate_world(w));
}

TEST_CASE("validate_world checks in-memory edits") {
  auto w = bundled_world("lins_family");
  w.agents[0].initial_needs.fun = 12;
  CHECK_THROWS_AS(validate_world(w), WorldConfigError);
}
