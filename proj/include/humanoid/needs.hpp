#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>

#include "humanoid/domain.hpp"

namespace humanoid {

enum class DecayMode : std::uint8_t { Stochastic, Deterministic };

std::string_view to_string(DecayMode m);
DecayMode parse_decay_mode(std::string_view s);

/// Expected decrease of each meter per five simulated hours.
struct DecayConfig {
  std::array<double, 5> rates_per_5h = {1.0, 4.0, 1.0, 4.0, 5.0};  // kAllNeeds order
  DecayMode mode = DecayMode::Stochastic;
  int step_minutes = 15;

  double rate(Need n) const { return rates_per_5h[static_cast<std::size_t>(n)]; }
  void set_rate(Need n, double r) { rates_per_5h[static_cast<std::size_t>(n)] = r; }

  /// Steps in a five-hour window (20 at 15-minute steps).
  int steps_per_window() const { return 300 / step_minutes; }
  /// Bernoulli probability of a one-point drop in a single step.
  double step_probability(Need n) const;
  /// Deterministic mode drops a meter when the 1-based step index is a
  /// multiple of this period; 0 means never.
  int deterministic_period(Need n) const;

  friend bool operator==(const DecayConfig&, const DecayConfig&) = default;
};

/// Seeded source for stochastic decay. Outputs depend only on the seed and the
/// number of draws, so results are identical on every platform.
class DecayStream {
 public:
  explicit DecayStream(std::uint64_t seed) : engine_(seed) {}
  /// Stream for one agent, derived from the run seed and the agent's name.
  static DecayStream for_agent(std::uint64_t seed, std::string_view agent_name);

  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

/// One decay tick. Stochastic mode draws exactly once per need in canonical
/// order regardless of meter values, keeping streams aligned across runs.
BasicNeeds apply_decay(BasicNeeds needs, const DecayConfig& config, long step_index,
                       DecayStream& stream);

/// +1 (clamped) on each named meter.
BasicNeeds apply_satisfaction(BasicNeeds needs, const std::set<Need>& satisfied);
/// Name-based overload; throws DomainError on an unknown need name.
BasicNeeds apply_satisfaction(BasicNeeds needs, const std::set<std::string>& satisfied);

/// Needs at or below the unmet threshold, in canonical order.
std::set<Need> unmet_needs(const BasicNeeds& needs);

/// "very hungry", "tired", ... for a meter in [0, 3]; empty otherwise.
std::string need_phrase(Need n, int value);

/// Natural-language rendering of the agent's internal state, e.g.
/// "John Lin is very hungry and feeling sad". Absent when the emotion is
/// neutral and no need is unmet.
std::optional<std::string> format_internal_state(const AgentState& state);

}  // namespace humanoid
