#include "humanoid/domain.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "humanoid/text.hpp"

namespace humanoid {

std::string_view to_string(Emotion e) {
  switch (e) {
    case Emotion::Angry: return "angry";
    case Emotion::Sad: return "sad";
    case Emotion::Afraid: return "afraid";
    case Emotion::Surprised: return "surprised";
    case Emotion::Happy: return "happy";
    case Emotion::Neutral: return "neutral";
    case Emotion::Disgusted: return "disgusted";
  }
  return "neutral";
}

std::optional<Emotion> try_parse_emotion(std::string_view label) {
  const auto lower = text::to_lower(text::trim(label));
  if (lower == "surprise") return Emotion::Surprised;
  for (Emotion e : kAllEmotions) {
    if (lower == to_string(e)) return e;
  }
  return std::nullopt;
}

Emotion parse_emotion(std::string_view label) {
  if (auto e = try_parse_emotion(label)) return *e;
  throw DomainError("unknown emotion label '" + std::string(label) + "'");
}

std::string_view to_string(Need n) {
  switch (n) {
    case Need::Fullness: return "fullness";
    case Need::Fun: return "fun";
    case Need::Health: return "health";
    case Need::Social: return "social";
    case Need::Energy: return "energy";
  }
  return "fullness";
}

std::optional<Need> try_parse_need(std::string_view name) {
  const auto lower = text::to_lower(text::trim(name));
  for (Need n : kAllNeeds) {
    if (lower == to_string(n)) return n;
  }
  return std::nullopt;
}

Need parse_need(std::string_view name) {
  if (auto n = try_parse_need(name)) return *n;
  throw DomainError("unknown need '" + std::string(name) + "'");
}

std::string_view satisfaction_action(Need n) {
  switch (n) {
    case Need::Fullness: return "eating food";
    case Need::Social: return "interacting with other people";
    case Need::Fun: return "doing something enjoyable";
    case Need::Health: return "doing something that improves their own physical health";
    case Need::Energy: return "resting or having a break";
  }
  return "";
}

int clamp_need(int value) { return std::clamp(value, kNeedMin, kNeedMax); }

int BasicNeeds::get(Need n) const {
  switch (n) {
    case Need::Fullness: return fullness;
    case Need::Fun: return fun;
    case Need::Health: return health;
    case Need::Social: return social;
    case Need::Energy: return energy;
  }
  return 0;
}

void BasicNeeds::set(Need n, int value) {
  value = clamp_need(value);
  switch (n) {
    case Need::Fullness: fullness = value; break;
    case Need::Fun: fun = value; break;
    case Need::Health: health = value; break;
    case Need::Social: social = value; break;
    case Need::Energy: energy = value; break;
  }
}

void BasicNeeds::validate() const {
  for (Need n : kAllNeeds) {
    const int v = get(n);
    if (v < kNeedMin || v > kNeedMax) {
      throw DomainError(std::string(to_string(n)) + " = " + std::to_string(v) +
                        " outside [0, 10]");
    }
  }
}

ClosenessLabel closeness_label(int closeness) {
  if (closeness < kClosenessMin || closeness > kClosenessMax) {
    throw DomainError("closeness " + std::to_string(closeness) + " outside [0, 30]");
  }
  if (closeness < 5) return ClosenessLabel::Distant;
  if (closeness < 10) return ClosenessLabel::RatherClose;
  if (closeness < 15) return ClosenessLabel::Close;
  return ClosenessLabel::VeryClose;
}

std::string_view to_string(ClosenessLabel label) {
  switch (label) {
    case ClosenessLabel::Distant: return "distant";
    case ClosenessLabel::RatherClose: return "rather close";
    case ClosenessLabel::Close: return "close";
    case ClosenessLabel::VeryClose: return "very close";
  }
  return "distant";
}

int clamp_closeness(int value) { return std::clamp(value, kClosenessMin, kClosenessMax); }

std::optional<TimeOfDay> TimeOfDay::try_parse(std::string_view s) {
  const auto t = text::trim(s);
  const auto colon = t.find(':');
  if (colon == std::string::npos || colon == 0 || colon > 2 || t.size() != colon + 3) {
    return std::nullopt;
  }
  int h = 0;
  int m = 0;
  const char* b = t.data();
  if (std::from_chars(b, b + colon, h).ec != std::errc{} ||
      std::from_chars(b + colon + 1, b + t.size(), m).ec != std::errc{}) {
    return std::nullopt;
  }
  if (h < 0 || m < 0 || m > 59 || h > 24 || (h == 24 && m != 0)) return std::nullopt;
  return TimeOfDay::hm(h, m);
}

TimeOfDay TimeOfDay::parse(std::string_view s) {
  if (auto t = try_parse(s)) return *t;
  throw DomainError("invalid time '" + std::string(s) + "', expected HH:MM");
}

std::string TimeOfDay::str() const {
  return fmt::format("{:02d}:{:02d}", minutes_ / 60, minutes_ % 60);
}

bool tiles_exactly(const std::vector<PlanSlot>& slots, TimeOfDay start, TimeOfDay end,
                   int step_minutes) {
  if (slots.empty()) return start == end;
  TimeOfDay cursor = start;
  for (const auto& s : slots) {
    if (s.start != cursor || s.end <= s.start) return false;
    if (step_minutes > 0 && s.end.minutes() - s.start.minutes() != step_minutes) return false;
    cursor = s.end;
  }
  return cursor == end;
}

int AgentState::closeness_to(std::string_view other) const {
  for (const auto& r : relationships) {
    if (r.to_agent == other) return r.closeness;
  }
  return kDefaultCloseness;
}

void AgentState::set_closeness(std::string_view other, int value) {
  value = clamp_closeness(value);
  auto it = std::lower_bound(relationships.begin(), relationships.end(), other,
                             [](const Relationship& r, std::string_view o) { return r.to_agent < o; });
  if (it != relationships.end() && it->to_agent == other) {
    it->closeness = value;
    return;
  }
  relationships.insert(it, Relationship{profile.name, std::string(other), value});
}

std::string Conversation::transcript() const {
  std::string out;
  for (const auto& t : turns) {
    out += t.speaker;
    out += ": ";
    out += t.text;
    out += '\n';
  }
  return out;
}

}  // namespace humanoid
