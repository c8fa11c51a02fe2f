#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "humanoid/cognition.hpp"
#include "humanoid/domain.hpp"
#include "humanoid/events.hpp"
#include "humanoid/needs.hpp"
#include "humanoid/planner.hpp"
#include "humanoid/timeline.hpp"
#include "humanoid/world.hpp"

namespace humanoid {

struct SimClock {
  int day = 0;
  int step = 0;  // within the day
  DayFrame frame;

  TimeOfDay time() const { return frame.time_of_step(step); }
  int steps_per_day() const { return frame.steps(); }
  /// 1-based step count since the start of the run.
  long global_step() const { return static_cast<long>(day) * steps_per_day() + step + 1; }
  long minutes_elapsed() const { return static_cast<long>(day) * 1440 + time().minutes(); }
};

struct RunOptions {
  std::uint64_t seed = 0;
  int num_days = 2;
  /// Holds every agent at this emotion for the whole run; activities and
  /// dialogue no longer update it.
  std::optional<Emotion> pinned_emotion;
  /// Labels every conversation turn with classify_sentiment.
  bool annotate_sentiment = false;
  /// Emit a ProviderCall event per provider call.
  bool log_provider_calls = true;
  std::function<void(const Event&)> on_event;
  /// Called once per simulated hour with a short status line.
  std::function<void(const std::string&)> on_progress;
};

/// A run stopped on a fatal provider failure. Carries everything recorded so far.
class SimulationAborted : public std::runtime_error {
 public:
  SimulationAborted(const std::string& what, Timeline partial, std::vector<Event> events)
      : std::runtime_error(what), partial_(std::move(partial)), events_(std::move(events)) {}
  const Timeline& partial() const { return partial_; }
  const std::vector<Event>& events() const { return events_; }

 private:
  Timeline partial_;
  std::vector<Event> events_;
};

/// World state plus the step loop. Agents are kept in name order, which is
/// also the order every phase visits them in. `provider` must outlive the
/// simulation.
class Simulation {
 public:
  Simulation(WorldConfig config, const CognitionProvider& provider, RunOptions options = {});

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs all remaining days. Throws SimulationAborted if planning fails.
  Timeline run();

  /// Plans the current day; called automatically by step() at step 0.
  void start_day();
  /// Advances one step, starting the day first if needed.
  void step();
  bool finished() const { return clock_.day >= options_.num_days; }

  /// Overwrites an agent's needs between steps (experiment set-up). Emitted as
  /// NeedChanged events with cause "override".
  void override_needs(const std::string& agent, const BasicNeeds& needs);

  const WorldConfig& config() const { return config_; }
  const SimClock& clock() const { return clock_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const AgentState& agent(const std::string& name) const;
  const std::vector<AgentState>& initial_agents() const { return initial_agents_; }
  const Timeline& timeline() const { return timeline_; }
  const std::vector<Event>& events() const { return events_; }
  const AuditedProvider& audit() const { return audited_; }

 private:
  AgentState& mutable_agent(const std::string& name);
  void emit(Event e);
  void set_need(AgentState& a, Need n, int value, const std::string& cause);
  void set_emotion(AgentState& a, Emotion e, const std::string& cause);
  AgentStepRecord act(AgentState& a, std::size_t index);
  void converse(StepRecord& record);
  std::vector<ClosenessEntry> relationship_snapshot() const;

  WorldConfig config_;
  AuditedProvider audited_;
  RunOptions options_;
  SimClock clock_;
  std::vector<AgentState> agents_;
  std::vector<AgentState> initial_agents_;
  std::vector<DecayStream> streams_;
  std::vector<LocationInfo> locations_;
  std::map<std::pair<std::string, std::string>, long> last_talk_;  // minutes_elapsed
  bool day_started_ = false;
  Timeline timeline_;
  std::vector<Event> events_;
};

/// Agents in name order with initial needs, emotion, location and closeness.
std::vector<AgentState> initial_agent_states(const WorldConfig& config);

}  // namespace humanoid
