#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "humanoid/domain.hpp"

namespace humanoid {

enum class EventKind : std::uint8_t {
  DayStarted,
  PlanCreated,
  NeedChanged,
  EmotionChanged,
  ActivityStarted,
  LocationChanged,
  Replanned,
  ConversationHeld,
  ClosenessChanged,
  ProviderCall,
};

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view s);

/// One state change (or provider call). Field meaning per kind:
///   NeedChanged       subject = need, before/after = meter values
///   EmotionChanged    before/after = labels
///   ActivityStarted   after = activity
///   LocationChanged   before/after = locations
///   PlanCreated       after = plan as JSON
///   Replanned         subject = change request, after = new plan as JSON
///   ConversationHeld  subject = partner, after = turn count
///   ClosenessChanged  subject = other agent, before/after = closeness
///   ProviderCall      subject = operation, before = input hash, after = outcome
struct Event {
  int day = 0;
  int step = 0;
  EventKind kind = EventKind::DayStarted;
  std::string agent;
  std::string subject;
  std::string before;
  std::string after;
  std::string cause;

  friend bool operator==(const Event&, const Event&) = default;
};

std::string to_json_line(const Event& e);
Event event_from_json_line(std::string_view line);

void write_events(const std::vector<Event>& events, std::ostream& out);
std::vector<Event> read_events(std::istream& in);

std::string plan_to_json(const HierarchicalPlan& plan);
HierarchicalPlan plan_from_json(std::string_view text);

/// Applies state-changing events to `agents` in order. Replaying a run's log
/// over its initial agent states reproduces the final states.
void replay(std::vector<AgentState>& agents, const std::vector<Event>& events);

}  // namespace humanoid
