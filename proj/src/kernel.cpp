#include "humanoid/kernel.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "humanoid/dialogue.hpp"
#include "humanoid/log.hpp"
#include "humanoid/planner.hpp"

namespace humanoid {

std::vector<AgentState> initial_agent_states(const WorldConfig& config) {
  std::vector<AgentState> agents;
  for (const auto& a : config.agents) {
    AgentState s;
    s.profile = a.profile;
    s.emotion = a.initial_emotion;
    s.needs = a.initial_needs;
    s.current_location = a.initial_location.value_or(config.locations.front().name);
    agents.push_back(std::move(s));
  }
  std::sort(agents.begin(), agents.end(),
            [](const AgentState& x, const AgentState& y) { return x.name() < y.name(); });
  for (auto& s : agents) {
    for (const auto& other : agents) {
      if (other.name() != s.name()) s.set_closeness(other.name(), config.initial_closeness(s.name(), other.name()));
    }
  }
  return agents;
}

Simulation::Simulation(WorldConfig config, const CognitionProvider& provider, RunOptions options)
    : config_(std::move(config)), audited_(provider), options_(std::move(options)) {
  if (options_.num_days < 1) throw std::invalid_argument("num_days must be at least 1");
  validate_world(config_);
  config_.decay.step_minutes = config_.step_minutes;
  clock_.frame = config_.frame();

  agents_ = initial_agent_states(config_);
  if (options_.pinned_emotion) {
    for (auto& a : agents_) a.emotion = *options_.pinned_emotion;
  }
  initial_agents_ = agents_;
  for (const auto& a : agents_) streams_.push_back(DecayStream::for_agent(options_.seed, a.name()));
  for (const auto& l : config_.locations) locations_.push_back({l.name, l.description, config_.root_of(l.name)});

  auto& h = timeline_.header;
  h.world_name = config_.world_name;
  h.seed = options_.seed;
  h.provider = provider.identity();
  h.num_days = options_.num_days;
  h.decay_mode = config_.decay.mode;
  for (const auto& a : agents_) h.agents.push_back(a.name());
  h.day_start = config_.day_start;
  h.day_end = config_.day_end;
  h.step_minutes = config_.step_minutes;

  if (options_.log_provider_calls) {
    audited_.set_listener([this](const CallRecord& r) {
      emit({r.site.day, r.site.step, EventKind::ProviderCall, r.site.agent, r.op, r.input_hash, r.outcome,
            r.failed ? "error" : ""});
    });
  }
}

const AgentState& Simulation::agent(const std::string& name) const {
  auto it = std::find_if(agents_.begin(), agents_.end(), [&](const AgentState& a) { return a.name() == name; });
  if (it == agents_.end()) throw std::out_of_range("no agent named '" + name + "'");
  return *it;
}

AgentState& Simulation::mutable_agent(const std::string& name) {
  return const_cast<AgentState&>(std::as_const(*this).agent(name));
}

void Simulation::emit(Event e) {
  if (options_.on_event) options_.on_event(e);
  events_.push_back(std::move(e));
}

void Simulation::set_need(AgentState& a, Need n, int value, const std::string& cause) {
  const int before = a.needs.get(n);
  a.needs.set(n, value);
  const int after = a.needs.get(n);
  if (after == before) return;
  emit({clock_.day, clock_.step, EventKind::NeedChanged, a.name(), std::string(to_string(n)),
        std::to_string(before), std::to_string(after), cause});
}

void Simulation::set_emotion(AgentState& a, Emotion e, const std::string& cause) {
  if (a.emotion == e) return;
  emit({clock_.day, clock_.step, EventKind::EmotionChanged, a.name(), "", std::string(to_string(a.emotion)),
        std::string(to_string(e)), cause});
  a.emotion = e;
}

void Simulation::override_needs(const std::string& agent, const BasicNeeds& needs) {
  needs.validate();
  auto& a = mutable_agent(agent);
  for (Need n : kAllNeeds) set_need(a, n, needs.get(n), "override");
}

void Simulation::start_day() {
  const std::string date = "Day " + std::to_string(clock_.day + 1);
  emit({clock_.day, 0, EventKind::DayStarted, "", date, "", "", ""});
  for (auto& a : agents_) {
    if (clock_.day > 0) {
      set_need(a, Need::Energy, kNeedMax, "new day");
      if (config_.reset_emotion_daily && !options_.pinned_emotion) set_emotion(a, Emotion::Neutral, "new day");
    }
    try {
      a.plan = plan_day(a.profile, date, clock_.day, clock_.frame, audited_, {a.name(), clock_.day, 0});
    } catch (const PlanningError& e) {
      timeline_.aborted = e.what();
      throw SimulationAborted(e.what(), timeline_, events_);
    }
    emit({clock_.day, 0, EventKind::PlanCreated, a.name(), date, "", plan_to_json(a.plan), ""});
  }
  day_started_ = true;
}

AgentStepRecord Simulation::act(AgentState& a, std::size_t index) {
  const CallSite site{a.name(), clock_.day, clock_.step};
  const TimeOfDay now = clock_.time();
  AgentStepRecord rec;
  rec.name = a.name();

  const BasicNeeds decayed = apply_decay(a.needs, config_.decay, clock_.global_step(), streams_[index]);
  for (Need n : kAllNeeds) set_need(a, n, decayed.get(n), "decay");

  const std::string planned = current_activity(a.plan, now);
  if (planned != a.current_activity) {
    emit({clock_.day, clock_.step, EventKind::ActivityStarted, a.name(), "", a.current_activity, planned, ""});
    a.current_activity = planned;
  }
  const std::string location = choose_location(a.name(), planned, a.current_location, locations_, audited_, site);
  if (location != a.current_location) {
    emit({clock_.day, clock_.step, EventKind::LocationChanged, a.name(), "", a.current_location, location,
          planned});
    a.current_location = location;
  }

  for (Need n : kAllNeeds) {
    try {
      if (audited_.classify_need_satisfaction(site, planned, n)) rec.satisfied.push_back(n);
    } catch (const std::exception& e) {
      logger().warn("need classification for {} failed, treating as unsatisfied: {}", a.name(), e.what());
    }
  }
  std::optional<Emotion> expressed;
  try {
    expressed = audited_.classify_emotion(site, planned);
  } catch (const std::exception& e) {
    logger().warn("emotion classification for {} failed, emotion unchanged: {}", a.name(), e.what());
  }
  for (Need n : rec.satisfied) set_need(a, n, a.needs.get(n) + 1, "activity: " + planned);
  if (expressed && !options_.pinned_emotion) set_emotion(a, *expressed, "activity: " + planned);

  const TimeOfDay next = now + clock_.frame.step_minutes;
  if (next < clock_.frame.end) {
    auto result = maybe_replan(a, next, audited_, site);
    if (result.changed) {
      a.plan = std::move(result.plan);
      emit({clock_.day, clock_.step, EventKind::Replanned, a.name(), result.change.value_or(""), "",
            plan_to_json(a.plan), format_internal_state(a).value_or("")});
      rec.replanned = true;
    }
  }

  rec.activity = planned;
  rec.planned_activity = planned;
  rec.location = a.current_location;
  rec.activity_emotion = expressed.value_or(Emotion::Neutral);
  return rec;
}

void Simulation::converse(StepRecord& record) {
  std::set<std::string> busy;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    for (std::size_t j = 0; j < agents_.size(); ++j) {
      AgentState& a = agents_[i];
      AgentState& b = agents_[j];
      if (i == j || busy.count(a.name()) || busy.count(b.name())) continue;
      if (a.current_location != b.current_location) continue;

      const auto key = std::minmax(a.name(), b.name());
      std::optional<int> since;
      if (auto it = last_talk_.find(key); it != last_talk_.end()) {
        since = static_cast<int>(clock_.minutes_elapsed() - it->second);
      }
      const CallSite site{a.name(), clock_.day, clock_.step};
      const auto topic = maybe_initiate(a, b, audited_, site, false, since);
      if (!topic) continue;

      Conversation conv = run_conversation(a, b, *topic, audited_, site);
      if (conv.turns.empty()) continue;
      if (options_.annotate_sentiment) {
        for (auto& t : conv.turns) {
          try {
            t.positive = audited_.classify_sentiment({t.speaker, clock_.day, clock_.step}, t.text);
          } catch (const std::exception& e) {
            logger().warn("sentiment annotation failed: {}", e.what());
          }
        }
      }

      const std::array<int, 2> closeness_before{a.closeness_to(b.name()), b.closeness_to(a.name())};
      const std::array<Emotion, 2> emotion_before{a.emotion, b.emotion};
      const auto outcome = apply_outcome(conv, a, b, audited_, site, !options_.pinned_emotion);

      const std::array<AgentState*, 2> people{&a, &b};
      const std::array<std::size_t, 2> index{i, j};
      for (int k = 0; k < 2; ++k) {
        AgentState& self = *people[k];
        const AgentState& other = *people[1 - k];
        const std::string cause = "conversation about " + conv.topic;
        // apply_outcome already wrote the new values; log them as changes.
        if (self.closeness_to(other.name()) != closeness_before[k]) {
          emit({clock_.day, clock_.step, EventKind::ClosenessChanged, self.name(), other.name(),
                std::to_string(closeness_before[k]), std::to_string(self.closeness_to(other.name())), cause});
        }
        if (self.emotion != emotion_before[k]) {
          emit({clock_.day, clock_.step, EventKind::EmotionChanged, self.name(), "",
                std::string(to_string(emotion_before[k])), std::string(to_string(self.emotion)), cause});
        }
        emit({clock_.day, clock_.step, EventKind::ConversationHeld, self.name(), other.name(), "",
              std::to_string(conv.turns.size()), conv.topic});

        auto& rec = record.agents[index[k]];
        rec.activity = "conversing with " + other.name();
        auto& sat = rec.satisfied;
        if (std::find(sat.begin(), sat.end(), Need::Social) == sat.end()) {
          try {
            if (audited_.classify_need_satisfaction({self.name(), clock_.day, clock_.step}, rec.activity,
                                                    Need::Social)) {
              set_need(self, Need::Social, self.needs.get(Need::Social) + 1, "conversation");
              sat.push_back(Need::Social);
              std::sort(sat.begin(), sat.end());
            }
          } catch (const std::exception& e) {
            logger().warn("need classification for {} failed: {}", self.name(), e.what());
          }
        }
      }

      busy.insert(a.name());
      busy.insert(b.name());
      last_talk_[key] = clock_.minutes_elapsed();
      timeline_.conversations.push_back({std::move(conv), outcome.closeness_delta});
    }
  }
}

std::vector<ClosenessEntry> Simulation::relationship_snapshot() const {
  std::vector<ClosenessEntry> out;
  for (const auto& a : agents_) {
    for (const auto& b : agents_) {
      if (a.name() != b.name()) out.push_back({a.name(), b.name(), a.closeness_to(b.name())});
    }
  }
  return out;
}

void Simulation::step() {
  if (finished()) throw std::logic_error("simulation already finished");
  if (!day_started_) start_day();

  StepRecord record{clock_.day, clock_.step, clock_.time(), {}, {}};
  for (std::size_t i = 0; i < agents_.size(); ++i) record.agents.push_back(act(agents_[i], i));
  converse(record);
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    record.agents[i].emotion = agents_[i].emotion;
    record.agents[i].needs = agents_[i].needs;
  }
  record.relationships = relationship_snapshot();
  timeline_.records.push_back(std::move(record));

  const TimeOfDay end_of_step = clock_.time() + clock_.frame.step_minutes;
  if (options_.on_progress && end_of_step.minutes() % 60 == 0) {
    options_.on_progress(fmt::format("{}: day {}/{} {} ({} conversations so far)", config_.world_name,
                                     clock_.day + 1, options_.num_days, end_of_step.str(),
                                     timeline_.conversations.size()));
  }

  if (++clock_.step == clock_.steps_per_day()) {
    ++clock_.day;
    clock_.step = 0;
    day_started_ = false;
  }
}

Timeline Simulation::run() {
  while (!finished()) step();
  return timeline_;
}

}  // namespace humanoid
