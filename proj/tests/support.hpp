#pragma once

#include <filesystem>
#include <string>

#include "humanoid/scripted_provider.hpp"
#include "humanoid/world.hpp"

namespace humanoid::testing {

inline std::filesystem::path test_dir() { return HUMANOID_TEST_DIR; }

inline const ScriptedRules& bundled_rules() {
  static const ScriptedRules rules = ScriptedRules::load(default_rules_path());
  return rules;
}

/// "lins_family", "friends" or "big_bang_theory".
inline WorldConfig bundled_world(const std::string& stem) {
  return load_world(default_data_root() / "worlds" / (stem + ".yaml"));
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("humanoid_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace humanoid::testing
