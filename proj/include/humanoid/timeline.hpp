#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "humanoid/cognition.hpp"
#include "humanoid/domain.hpp"
#include "humanoid/needs.hpp"

namespace humanoid {

inline constexpr int kTimelineSchemaVersion = 1;

struct AgentStepRecord {
  std::string name;
  std::string activity;          // what the agent did; "conversing with X" when talking
  std::string planned_activity;  // the quarter-hour plan slot
  std::string location;
  Emotion emotion = Emotion::Neutral;           // after the step
  Emotion activity_emotion = Emotion::Neutral;  // classified from the planned activity
  BasicNeeds needs;                             // after the step
  std::vector<Need> satisfied;
  bool replanned = false;

  friend bool operator==(const AgentStepRecord&, const AgentStepRecord&) = default;
};

struct ClosenessEntry {
  std::string from;
  std::string to;
  int closeness = kDefaultCloseness;

  friend bool operator==(const ClosenessEntry&, const ClosenessEntry&) = default;
};

struct StepRecord {
  int day = 0;
  int step = 0;
  TimeOfDay time;
  std::vector<AgentStepRecord> agents;
  std::vector<ClosenessEntry> relationships;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct ConversationRecord {
  Conversation conversation;
  std::array<int, 2> closeness_delta{0, 0};  // participants[i] -> other

  friend bool operator==(const ConversationRecord&, const ConversationRecord&) = default;
};

struct TimelineHeader {
  int schema_version = kTimelineSchemaVersion;
  std::string world_name;
  std::uint64_t seed = 0;
  ProviderIdentity provider;
  int num_days = 0;
  DecayMode decay_mode = DecayMode::Stochastic;
  std::vector<std::string> agents;
  TimeOfDay day_start = TimeOfDay::hm(6, 0);
  TimeOfDay day_end = TimeOfDay::hm(24, 0);
  int step_minutes = 15;

  friend bool operator==(const TimelineHeader&, const TimelineHeader&) = default;
};

struct Timeline {
  TimelineHeader header;
  std::vector<StepRecord> records;
  std::vector<ConversationRecord> conversations;
  /// Set when the run stopped early; the records then cover only part of it.
  std::optional<std::string> aborted;

  /// One per agent per step.
  std::size_t activity_record_count() const;
  friend bool operator==(const Timeline&, const Timeline&) = default;
};

class TimelineFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stable JSON text (fixed key order, two-space indent, trailing newline).
std::string timeline_to_json(const Timeline& t);
/// Throws TimelineFormatError on malformed input or an unsupported schema_version.
Timeline timeline_from_json(const std::string& text);

void write_timeline(const Timeline& t, const std::filesystem::path& path);
Timeline read_timeline(const std::filesystem::path& path);

/// One row per agent per step, with a header row.
void write_timeline_csv(const Timeline& t, std::ostream& out);

}  // namespace humanoid
