#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "humanoid/cognition.hpp"
#include "humanoid/domain.hpp"
#include "humanoid/needs.hpp"

namespace humanoid {

struct LocationConfig {
  std::string name;
  std::string description;
  std::optional<std::string> contained_in;

  friend bool operator==(const LocationConfig&, const LocationConfig&) = default;
};

struct AgentConfig {
  AgentProfile profile;
  Emotion initial_emotion = Emotion::Neutral;
  BasicNeeds initial_needs;
  std::optional<std::string> initial_location;

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

struct RelationshipConfig {
  std::string from;
  std::string to;
  int closeness = kDefaultCloseness;
  bool symmetric = true;

  friend bool operator==(const RelationshipConfig&, const RelationshipConfig&) = default;
};

struct WorldConfig {
  std::string world_name;
  std::string description;
  int step_minutes = 15;
  TimeOfDay day_start = TimeOfDay::hm(6, 0);
  TimeOfDay day_end = TimeOfDay::hm(24, 0);
  DecayConfig decay;
  bool reset_emotion_daily = false;
  std::vector<LocationConfig> locations;
  std::vector<AgentConfig> agents;
  std::vector<RelationshipConfig> relationships;

  DayFrame frame() const { return {day_start, day_end, step_minutes}; }
  /// Top-level ancestor of a declared location.
  std::string root_of(const std::string& location) const;
  /// Closeness from -> to after applying defaults and seeded relationships.
  int initial_closeness(const std::string& from, const std::string& to) const;
  /// Replaces every relationship with a symmetric seed of `closeness`.
  void set_all_closeness(int closeness);

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

struct Diagnostic {
  std::string path;  // e.g. "agents[1].initial_needs.fun"
  int line = 0;      // 1-based; 0 when unknown
  std::string message;

  std::string str() const;
};

/// World file rejected; carries one diagnostic per problem found.
class WorldConfigError : public std::runtime_error {
 public:
  explicit WorldConfigError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct LoadOptions {
  /// Unknown fields are errors when strict, warnings otherwise.
  bool strict = true;
};

WorldConfig parse_world(const std::string& yaml_text, const LoadOptions& options = {});
WorldConfig load_world(const std::filesystem::path& path, const LoadOptions& options = {});

/// Checks every invariant of an in-memory config (the loader runs this too).
void validate_world(const WorldConfig& config);

/// Paths of the bundled example worlds.
std::vector<std::filesystem::path> bundled_world_paths();

}  // namespace humanoid
