#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "humanoid/cognition.hpp"
#include "humanoid/domain.hpp"

namespace humanoid {

/// Day planning failed for an agent; fatal to the run.
class PlanningError : public std::runtime_error {
 public:
  PlanningError(std::string agent, std::string stage, const std::string& detail);
  const std::string& agent() const { return agent_; }
  const std::string& stage() const { return stage_; }

 private:
  std::string agent_;
  std::string stage_;
};

/// Outline -> hourly -> quarter-hour. The quarter-hour list always tiles the
/// frame exactly, whatever the provider returns.
HierarchicalPlan plan_day(const AgentProfile& profile, const std::string& date, int day_index,
                          const DayFrame& frame, const CognitionProvider& provider,
                          const CallSite& site);

struct ReplanResult {
  HierarchicalPlan plan;
  bool changed = false;
  std::optional<std::string> change;
};

/// Asks the provider whether the rest of the day should change given the
/// agent's internal state. Slots starting before `now` are never touched and
/// no provider call is made when the internal state has nothing to report.
ReplanResult maybe_replan(const AgentState& state, TimeOfDay now, const CognitionProvider& provider,
                          const CallSite& site);

/// Activity of the quarter-hour slot containing `now`. Throws
/// std::out_of_range outside the planned day.
const std::string& current_activity(const HierarchicalPlan& plan, TimeOfDay now);

struct LocationInfo {
  std::string name;
  std::string description;
  std::string root;  // top-level ancestor (itself for roots)
};

/// Always returns a declared location; undeclared provider answers fall back
/// to `previous_location`.
std::string choose_location(const std::string& agent, const std::string& activity,
                            const std::string& previous_location,
                            const std::vector<LocationInfo>& locations,
                            const CognitionProvider& provider, const CallSite& site);

/// Rebuilds `slots` onto the [start, end) grid of width `step_minutes`. Each
/// cell takes the slot covering its start, else the latest slot starting
/// before it, else `fallback`.
std::vector<PlanSlot> snap_to_grid(const std::vector<PlanSlot>& slots, TimeOfDay start,
                                   TimeOfDay end, int step_minutes,
                                   const std::vector<PlanSlot>& fallback);

}  // namespace humanoid
