#include "humanoid/needs.hpp"

#include <cmath>
#include <vector>

#include "humanoid/text.hpp"

namespace humanoid {

std::string_view to_string(DecayMode m) {
  return m == DecayMode::Stochastic ? "stochastic" : "deterministic";
}

DecayMode parse_decay_mode(std::string_view s) {
  const auto lower = text::to_lower(s);
  if (lower == "stochastic") return DecayMode::Stochastic;
  if (lower == "deterministic") return DecayMode::Deterministic;
  throw DomainError("unknown decay mode '" + std::string(s) + "'");
}

double DecayConfig::step_probability(Need n) const {
  return rate(n) / static_cast<double>(steps_per_window());
}

int DecayConfig::deterministic_period(Need n) const {
  const double r = rate(n);
  if (r <= 0.0) return 0;
  return static_cast<int>(std::lround(static_cast<double>(steps_per_window()) / r));
}

DecayStream DecayStream::for_agent(std::uint64_t seed, std::string_view agent_name) {
  // splitmix64 finalizer over the combined seed.
  std::uint64_t z = seed ^ text::fnv1a(agent_name);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return DecayStream(z ^ (z >> 31));
}

bool DecayStream::bernoulli(double p) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return u < p;
}

BasicNeeds apply_decay(BasicNeeds needs, const DecayConfig& config, long step_index,
                       DecayStream& stream) {
  for (Need n : kAllNeeds) {
    bool drop = false;
    if (config.mode == DecayMode::Stochastic) {
      drop = stream.bernoulli(config.step_probability(n));
    } else {
      const int period = config.deterministic_period(n);
      drop = period > 0 && step_index > 0 && step_index % period == 0;
    }
    if (drop) needs.set(n, needs.get(n) - 1);
  }
  return needs;
}

BasicNeeds apply_satisfaction(BasicNeeds needs, const std::set<Need>& satisfied) {
  for (Need n : satisfied) needs.set(n, needs.get(n) + 1);
  return needs;
}

BasicNeeds apply_satisfaction(BasicNeeds needs, const std::set<std::string>& satisfied) {
  std::set<Need> parsed;
  for (const auto& name : satisfied) parsed.insert(parse_need(name));
  return apply_satisfaction(needs, parsed);
}

std::set<Need> unmet_needs(const BasicNeeds& needs) {
  std::set<Need> out;
  for (Need n : kAllNeeds) {
    if (needs.get(n) <= kUnmetThreshold) out.insert(n);
  }
  return out;
}

namespace {

std::string_view need_adjective(Need n) {
  switch (n) {
    case Need::Fullness: return "hungry";
    case Need::Fun: return "bored";
    case Need::Health: return "unwell";
    case Need::Social: return "lonely";
    case Need::Energy: return "tired";
  }
  return "";
}

std::string_view need_modifier(int value) {
  switch (value) {
    case 3: return "slightly ";
    case 2: return "";
    case 1: return "very ";
    default: return "extremely ";
  }
}

}  // namespace

std::string need_phrase(Need n, int value) {
  if (value > kUnmetThreshold) return {};
  return std::string(need_modifier(value)) + std::string(need_adjective(n));
}

std::optional<std::string> format_internal_state(const AgentState& state) {
  std::vector<std::string> phrases;
  for (Need n : unmet_needs(state.needs)) phrases.push_back(need_phrase(n, state.needs.get(n)));
  if (state.emotion != Emotion::Neutral) {
    phrases.push_back("feeling " + std::string(to_string(state.emotion)));
  }
  if (phrases.empty()) return std::nullopt;
  return state.name() + " is " + text::join(phrases, " and ");
}

}  // namespace humanoid
