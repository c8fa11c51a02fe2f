#include "humanoid/events.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace humanoid {

using nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 10> kKindNames = {{
    {EventKind::DayStarted, "DayStarted"},
    {EventKind::PlanCreated, "PlanCreated"},
    {EventKind::NeedChanged, "NeedChanged"},
    {EventKind::EmotionChanged, "EmotionChanged"},
    {EventKind::ActivityStarted, "ActivityStarted"},
    {EventKind::LocationChanged, "LocationChanged"},
    {EventKind::Replanned, "Replanned"},
    {EventKind::ConversationHeld, "ConversationHeld"},
    {EventKind::ClosenessChanged, "ClosenessChanged"},
    {EventKind::ProviderCall, "ProviderCall"},
}};

ordered_json slots_json(const std::vector<PlanSlot>& slots) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : slots) arr.push_back(ordered_json::array({s.start.str(), s.end.str(), s.activity}));
  return arr;
}

std::vector<PlanSlot> slots_from(const ordered_json& arr) {
  std::vector<PlanSlot> out;
  for (const auto& s : arr) {
    out.push_back({TimeOfDay::parse(s.at(0).get<std::string>()), TimeOfDay::parse(s.at(1).get<std::string>()),
                   s.at(2).get<std::string>()});
  }
  return out;
}

AgentState& find_agent(std::vector<AgentState>& agents, const std::string& name) {
  auto it = std::find_if(agents.begin(), agents.end(), [&](const AgentState& a) { return a.name() == name; });
  if (it == agents.end()) throw std::invalid_argument("event refers to unknown agent '" + name + "'");
  return *it;
}

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

EventKind parse_event_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

std::string to_json_line(const Event& e) {
  ordered_json j;
  j["day"] = e.day;
  j["step"] = e.step;
  j["kind"] = std::string(to_string(e.kind));
  j["agent"] = e.agent;
  j["subject"] = e.subject;
  j["before"] = e.before;
  j["after"] = e.after;
  j["cause"] = e.cause;
  return j.dump();
}

Event event_from_json_line(std::string_view line) {
  const auto j = ordered_json::parse(line);
  Event e;
  e.day = j.at("day").get<int>();
  e.step = j.at("step").get<int>();
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  e.agent = j.at("agent").get<std::string>();
  e.subject = j.at("subject").get<std::string>();
  e.before = j.at("before").get<std::string>();
  e.after = j.at("after").get<std::string>();
  e.cause = j.at("cause").get<std::string>();
  return e;
}

void write_events(const std::vector<Event>& events, std::ostream& out) {
  for (const auto& e : events) out << to_json_line(e) << '\n';
}

std::vector<Event> read_events(std::istream& in) {
  std::vector<Event> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(event_from_json_line(line));
  }
  return out;
}

std::string plan_to_json(const HierarchicalPlan& plan) {
  ordered_json j;
  j["day_outline"] = slots_json(plan.day_outline);
  j["hourly"] = slots_json(plan.hourly);
  j["quarter_hour"] = slots_json(plan.quarter_hour);
  j["outline_superseded"] = plan.outline_superseded;
  return j.dump();
}

HierarchicalPlan plan_from_json(std::string_view text) {
  const auto j = ordered_json::parse(text);
  HierarchicalPlan p;
  p.day_outline = slots_from(j.at("day_outline"));
  p.hourly = slots_from(j.at("hourly"));
  p.quarter_hour = slots_from(j.at("quarter_hour"));
  p.outline_superseded = j.at("outline_superseded").get<bool>();
  return p;
}

void replay(std::vector<AgentState>& agents, const std::vector<Event>& events) {
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::NeedChanged:
        find_agent(agents, e.agent).needs.set(parse_need(e.subject), std::stoi(e.after));
        break;
      case EventKind::EmotionChanged:
        find_agent(agents, e.agent).emotion = parse_emotion(e.after);
        break;
      case EventKind::ActivityStarted:
        find_agent(agents, e.agent).current_activity = e.after;
        break;
      case EventKind::LocationChanged:
        find_agent(agents, e.agent).current_location = e.after;
        break;
      case EventKind::PlanCreated:
      case EventKind::Replanned:
        find_agent(agents, e.agent).plan = plan_from_json(e.after);
        break;
      case EventKind::ClosenessChanged:
        find_agent(agents, e.agent).set_closeness(e.subject, std::stoi(e.after));
        break;
      case EventKind::DayStarted:
      case EventKind::ConversationHeld:
      case EventKind::ProviderCall:
        break;
    }
  }
}

}  // namespace humanoid
