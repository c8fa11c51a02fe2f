#include "humanoid/planner.hpp"

#include <algorithm>

#include "humanoid/log.hpp"
#include "humanoid/needs.hpp"

namespace humanoid {

PlanningError::PlanningError(std::string agent, std::string stage, const std::string& detail)
    : std::runtime_error("planning failed for " + agent + " at " + stage + ": " + detail),
      agent_(std::move(agent)),
      stage_(std::move(stage)) {}

namespace {

const PlanSlot* covering(const std::vector<PlanSlot>& slots, TimeOfDay t) {
  const PlanSlot* latest = nullptr;
  for (const auto& s : slots) {
    if (s.contains(t)) return &s;
    if (s.start <= t && (!latest || s.start > latest->start)) latest = &s;
  }
  return latest;
}

std::vector<PlanSlot> contiguous_outline(std::vector<PlanSlot> slots, const DayFrame& frame) {
  std::erase_if(slots, [&](const PlanSlot& s) { return s.start >= frame.end || s.activity.empty(); });
  std::stable_sort(slots.begin(), slots.end(),
                   [](const PlanSlot& a, const PlanSlot& b) { return a.start < b.start; });
  if (slots.empty()) return slots;
  slots.front().start = frame.start;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    slots[i].start = std::max(slots[i].start, frame.start);
    slots[i].end = i + 1 < slots.size() ? slots[i + 1].start : frame.end;
  }
  std::erase_if(slots, [](const PlanSlot& s) { return s.end <= s.start; });
  return slots;
}

template <typename F>
auto stage(const std::string& agent, const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PlanningError&) {
    throw;
  } catch (const std::exception& e) {
    throw PlanningError(agent, name, e.what());
  }
}

}  // namespace

std::vector<PlanSlot> snap_to_grid(const std::vector<PlanSlot>& slots, TimeOfDay start,
                                   TimeOfDay end, int step_minutes,
                                   const std::vector<PlanSlot>& fallback) {
  std::vector<PlanSlot> out;
  for (TimeOfDay t = start; t < end; t = t + step_minutes) {
    const PlanSlot* s = covering(slots, t);
    if (!s || s->activity.empty()) s = covering(fallback, t);
    out.push_back({t, std::min(t + step_minutes, end), s ? s->activity : std::string()});
  }
  return out;
}

HierarchicalPlan plan_day(const AgentProfile& profile, const std::string& date, int day_index,
                          const DayFrame& frame, const CognitionProvider& provider,
                          const CallSite& site) {
  const PlanningRequest req{profile, date, day_index, frame};
  HierarchicalPlan plan;

  plan.day_outline = stage(profile.name, "day outline", [&] {
    auto outline = contiguous_outline(provider.generate_day_outline(site, req), frame);
    if (outline.empty()) throw ProviderError("provider returned an empty day outline");
    return outline;
  });

  plan.hourly = stage(profile.name, "hourly refinement", [&] {
    auto raw = provider.refine_to_hourly(site, req, plan.day_outline);
    return snap_to_grid(raw, frame.start, frame.end, 60, plan.day_outline);
  });

  plan.quarter_hour = stage(profile.name, "quarter-hour refinement", [&] {
    auto raw = provider.refine_to_quarter_hour(site, req, plan.day_outline, plan.hourly);
    return snap_to_grid(raw, frame.start, frame.end, frame.step_minutes, plan.hourly);
  });

  for (const auto& s : plan.quarter_hour) {
    if (s.activity.empty()) {
      throw PlanningError(profile.name, "quarter-hour refinement", "slot " + s.start.str() + " is empty");
    }
  }
  return plan;
}

ReplanResult maybe_replan(const AgentState& state, TimeOfDay now, const CognitionProvider& provider,
                          const CallSite& site) {
  ReplanResult result{state.plan, false, std::nullopt};
  const auto internal = format_internal_state(state);
  if (!internal) return result;

  const auto& quarter = state.plan.quarter_hour;
  auto first_remaining = std::find_if(quarter.begin(), quarter.end(),
                                      [&](const PlanSlot& s) { return s.start >= now; });
  if (first_remaining == quarter.end()) return result;

  ReplanRequest req{state.name(), *internal, now, quarter};
  try {
    result.change = provider.propose_plan_change(site, req);
    if (!result.change) return result;

    const std::vector<PlanSlot> old_remaining(first_remaining, quarter.end());
    const int step = first_remaining->end.minutes() - first_remaining->start.minutes();
    auto fresh = snap_to_grid(provider.regenerate_remaining_plan(site, req, *result.change),
                              first_remaining->start, quarter.back().end, step, old_remaining);
    if (fresh == old_remaining) return result;

    auto& plan = result.plan.quarter_hour;
    plan.erase(plan.begin() + (first_remaining - quarter.begin()), plan.end());
    plan.insert(plan.end(), fresh.begin(), fresh.end());
    result.plan.outline_superseded = true;
    result.changed = true;
  } catch (const std::exception& e) {
    logger().warn("replanning for {} at {} failed, keeping plan: {}", state.name(), now.str(), e.what());
    result.plan = state.plan;
    result.changed = false;
  }
  return result;
}

const std::string& current_activity(const HierarchicalPlan& plan, TimeOfDay now) {
  for (const auto& s : plan.quarter_hour) {
    if (s.contains(now)) return s.activity;
  }
  throw std::out_of_range("time " + now.str() + " is outside the planned day");
}

std::string choose_location(const std::string& agent, const std::string& activity,
                            const std::string& previous_location,
                            const std::vector<LocationInfo>& locations,
                            const CognitionProvider& provider, const CallSite& site) {
  if (locations.empty()) throw std::invalid_argument("world has no locations");
  if (locations.size() == 1) return locations.front().name;

  LocationRequest req{agent, activity, previous_location, {}, {}, {}};
  for (const auto& l : locations) {
    req.locations.push_back(l.name);
    req.descriptions.push_back(l.description);
    req.roots.push_back(l.root);
  }
  std::string chosen;
  try {
    chosen = provider.choose_location(site, req);
  } catch (const std::exception& e) {
    logger().warn("location choice for {} failed: {}", agent, e.what());
    return previous_location;
  }
  const bool declared = std::any_of(locations.begin(), locations.end(),
                                    [&](const LocationInfo& l) { return l.name == chosen; });
  if (!declared) {
    logger().warn("provider chose undeclared location '{}' for {}; staying at {}", chosen, agent,
                  previous_location);
    return previous_location;
  }
  return chosen;
}

}  // namespace humanoid
