#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace humanoid {

/// Raised when a value violates a domain bound or label set.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Emotion

enum class Emotion : std::uint8_t { Angry, Sad, Afraid, Surprised, Happy, Neutral, Disgusted };

inline constexpr std::array<Emotion, 7> kAllEmotions = {
    Emotion::Angry, Emotion::Sad,     Emotion::Afraid,   Emotion::Surprised,
    Emotion::Happy, Emotion::Neutral, Emotion::Disgusted};

std::string_view to_string(Emotion e);

/// Parses one of the seven labels (case-insensitive). "surprise" is accepted
/// as an alias of "surprised". Throws DomainError on anything else.
Emotion parse_emotion(std::string_view label);
std::optional<Emotion> try_parse_emotion(std::string_view label);

// ---------------------------------------------------------------------------
// Basic needs

enum class Need : std::uint8_t { Fullness, Fun, Health, Social, Energy };

/// Canonical need order; also the order need phrases are rendered in.
inline constexpr std::array<Need, 5> kAllNeeds = {Need::Fullness, Need::Fun, Need::Health,
                                                  Need::Social, Need::Energy};

inline constexpr int kNeedMin = 0;
inline constexpr int kNeedMax = 10;
inline constexpr int kUnmetThreshold = 3;

std::string_view to_string(Need n);
Need parse_need(std::string_view name);
std::optional<Need> try_parse_need(std::string_view name);

/// The action phrase used when asking whether an activity satisfies a need.
std::string_view satisfaction_action(Need n);

int clamp_need(int value);

struct BasicNeeds {
  int fullness = 5;
  int fun = 5;
  int health = 5;
  int social = 5;
  int energy = 10;

  int get(Need n) const;
  void set(Need n, int value);  // clamps

  /// Throws DomainError if any meter is outside [0, 10].
  void validate() const;

  friend bool operator==(const BasicNeeds&, const BasicNeeds&) = default;
};

// ---------------------------------------------------------------------------
// Relationships

inline constexpr int kClosenessMin = 0;
inline constexpr int kClosenessMax = 30;
inline constexpr int kDefaultCloseness = 5;

enum class ClosenessLabel : std::uint8_t { Distant, RatherClose, Close, VeryClose };

/// Maps closeness in [0, 30] to its qualitative band. Throws DomainError when
/// out of range.
ClosenessLabel closeness_label(int closeness);
std::string_view to_string(ClosenessLabel label);
int clamp_closeness(int value);

struct Relationship {
  std::string from_agent;
  std::string to_agent;
  int closeness = kDefaultCloseness;

  friend bool operator==(const Relationship&, const Relationship&) = default;
};

// ---------------------------------------------------------------------------
// Time

/// Minutes since midnight. 24:00 (1440) is a valid end-of-day bound.
class TimeOfDay {
 public:
  constexpr TimeOfDay() = default;
  constexpr explicit TimeOfDay(int minutes) : minutes_(minutes) {}
  static constexpr TimeOfDay hm(int hours, int minutes) { return TimeOfDay(hours * 60 + minutes); }

  /// Parses "HH:MM" (00:00 through 24:00).
  static TimeOfDay parse(std::string_view text);
  static std::optional<TimeOfDay> try_parse(std::string_view text);

  constexpr int minutes() const { return minutes_; }
  std::string str() const;

  constexpr TimeOfDay operator+(int delta) const { return TimeOfDay(minutes_ + delta); }
  friend constexpr auto operator<=>(TimeOfDay, TimeOfDay) = default;

 private:
  int minutes_ = 0;
};

// ---------------------------------------------------------------------------
// Plans

struct PlanSlot {
  TimeOfDay start;
  TimeOfDay end;
  std::string activity;

  bool contains(TimeOfDay t) const { return start <= t && t < end; }
  friend bool operator==(const PlanSlot&, const PlanSlot&) = default;
};

struct HierarchicalPlan {
  std::vector<PlanSlot> day_outline;
  std::vector<PlanSlot> hourly;
  std::vector<PlanSlot> quarter_hour;
  /// Set once a replan has rewritten quarter-hour slots; the outline and
  /// hourly lists then no longer describe the day exactly.
  bool outline_superseded = false;

  friend bool operator==(const HierarchicalPlan&, const HierarchicalPlan&) = default;
};

/// True when `slots` are contiguous, non-empty, chronologically ordered and
/// span exactly [start, end) in steps of `step_minutes` (0 = any width).
bool tiles_exactly(const std::vector<PlanSlot>& slots, TimeOfDay start, TimeOfDay end,
                   int step_minutes = 0);

// ---------------------------------------------------------------------------
// Agents

struct AgentProfile {
  std::string name;
  int age = 0;
  std::vector<std::string> description;
  std::vector<std::string> traits;
  std::string example_day_plan;
  std::string life_outlook;

  friend bool operator==(const AgentProfile&, const AgentProfile&) = default;
};

struct AgentState {
  AgentProfile profile;
  Emotion emotion = Emotion::Neutral;
  BasicNeeds needs;
  std::vector<Relationship> relationships;  // sorted by to_agent
  HierarchicalPlan plan;
  std::string current_activity;
  std::string current_location;

  const std::string& name() const { return profile.name; }
  /// Closeness toward `other`; kDefaultCloseness when no entry exists.
  int closeness_to(std::string_view other) const;
  void set_closeness(std::string_view other, int value);  // clamps

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

// ---------------------------------------------------------------------------
// Conversations

inline constexpr int kMaxConversationTurns = 10;

struct Turn {
  std::string speaker;
  std::string text;
  std::optional<bool> positive;  // filled only when sentiment is annotated

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Conversation {
  std::array<std::string, 2> participants;  // [initiator, partner]
  std::string topic;
  std::vector<Turn> turns;
  std::array<std::optional<bool>, 2> enjoyed;
  int day = 0;
  int step_started = 0;

  /// "Speaker: text" lines, one per turn.
  std::string transcript() const;
  friend bool operator==(const Conversation&, const Conversation&) = default;
};

}  // namespace humanoid
