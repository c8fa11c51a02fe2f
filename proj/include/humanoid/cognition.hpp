#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "humanoid/domain.hpp"

namespace humanoid {

/// A provider could not produce a usable answer (transport failure, refusal,
/// malformed output after re-asks).
class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Who is asking and when; used for audit logging only.
struct CallSite {
  std::string agent;
  int day = 0;
  int step = 0;
};

struct ProviderIdentity {
  std::string name;
  std::string version;

  friend bool operator==(const ProviderIdentity&, const ProviderIdentity&) = default;
};

/// Bounds of the simulated day as seen by planning calls.
struct DayFrame {
  TimeOfDay start = TimeOfDay::hm(6, 0);
  TimeOfDay end = TimeOfDay::hm(24, 0);
  int step_minutes = 15;

  int steps() const { return (end.minutes() - start.minutes()) / step_minutes; }
  int hours() const { return (end.minutes() - start.minutes()) / 60; }
  TimeOfDay time_of_step(int step) const { return start + step * step_minutes; }
};

struct PlanningRequest {
  AgentProfile profile;
  std::string date;  // e.g. "Day 1"
  int day_index = 0;
  DayFrame frame;
};

struct ReplanRequest {
  std::string name;
  std::string internal_state;
  TimeOfDay now;
  /// The whole quarter-hour plan; slots starting before `now` are history.
  std::vector<PlanSlot> plan;

  /// Slots at or after `now`.
  std::vector<PlanSlot> remaining() const;
};

struct LocationRequest {
  std::string agent;
  std::string activity;
  std::string previous_location;
  std::vector<std::string> locations;
  std::vector<std::string> descriptions;  // parallel to `locations`, may be empty
  std::vector<std::string> roots;         // top-level ancestor of each location, may be empty

  std::string root_of(std::string_view location) const;
};

struct DialogueContext {
  AgentProfile self;
  std::string other;
  std::string self_activity;
  std::string other_activity;
  std::optional<std::string> internal_state;
  int closeness = kDefaultCloseness;  // self -> other
  std::string topic;                  // empty while deciding
  /// Minutes since these two last talked; absent if never.
  std::optional<int> minutes_since_last_talk;

  /// "John Lin is feeling close to Eddy Lin".
  std::string closeness_description() const;
};

/// Everything the simulation "thinks" goes through this interface.
/// Implementations must tolerate concurrent calls.
class CognitionProvider {
 public:
  virtual ~CognitionProvider() = default;

  virtual ProviderIdentity identity() const = 0;

  virtual bool classify_need_satisfaction(const CallSite& site, std::string_view activity,
                                          Need need) const = 0;
  virtual Emotion classify_emotion(const CallSite& site, std::string_view activity) const = 0;
  virtual bool judge_enjoyment(const CallSite& site, std::string_view transcript,
                               std::string_view name) const = 0;
  virtual bool classify_sentiment(const CallSite& site, std::string_view utterance) const = 0;

  virtual std::vector<PlanSlot> generate_day_outline(const CallSite& site,
                                                     const PlanningRequest& req) const = 0;
  virtual std::vector<PlanSlot> refine_to_hourly(const CallSite& site, const PlanningRequest& req,
                                                 std::span<const PlanSlot> outline) const = 0;
  virtual std::vector<PlanSlot> refine_to_quarter_hour(const CallSite& site,
                                                       const PlanningRequest& req,
                                                       std::span<const PlanSlot> outline,
                                                       std::span<const PlanSlot> hourly) const = 0;
  /// One-sentence change request, or absent to keep the plan.
  virtual std::optional<std::string> propose_plan_change(const CallSite& site,
                                                         const ReplanRequest& req) const = 0;
  /// New slots for the remaining part of the day honoring `change`.
  virtual std::vector<PlanSlot> regenerate_remaining_plan(const CallSite& site,
                                                          const ReplanRequest& req,
                                                          std::string_view change) const = 0;

  virtual std::string choose_location(const CallSite& site, const LocationRequest& req) const = 0;

  virtual std::optional<std::string> decide_dialogue(const CallSite& site,
                                                     const DialogueContext& ctx) const = 0;
  /// Next line for ctx.self, or absent to end the conversation.
  virtual std::optional<std::string> next_utterance(const CallSite& site,
                                                    const DialogueContext& ctx,
                                                    std::span<const Turn> history) const = 0;
};

// ---------------------------------------------------------------------------
// Audit

struct CallRecord {
  std::string op;
  CallSite site;
  std::string input_hash;  // hex FNV-1a of the canonical request text
  std::string outcome;
  bool failed = false;
};

/// Decorator that records every call made through it, then forwards.
class AuditedProvider final : public CognitionProvider {
 public:
  using Listener = std::function<void(const CallRecord&)>;

  explicit AuditedProvider(const CognitionProvider& inner) : inner_(inner) {}

  void set_listener(Listener l);
  std::vector<CallRecord> records() const;
  std::size_t count(std::string_view op) const;
  std::size_t total() const;
  void clear();

  ProviderIdentity identity() const override { return inner_.identity(); }
  bool classify_need_satisfaction(const CallSite& site, std::string_view activity,
                                  Need need) const override;
  Emotion classify_emotion(const CallSite& site, std::string_view activity) const override;
  bool judge_enjoyment(const CallSite& site, std::string_view transcript,
                       std::string_view name) const override;
  bool classify_sentiment(const CallSite& site, std::string_view utterance) const override;
  std::vector<PlanSlot> generate_day_outline(const CallSite& site,
                                             const PlanningRequest& req) const override;
  std::vector<PlanSlot> refine_to_hourly(const CallSite& site, const PlanningRequest& req,
                                         std::span<const PlanSlot> outline) const override;
  std::vector<PlanSlot> refine_to_quarter_hour(const CallSite& site, const PlanningRequest& req,
                                               std::span<const PlanSlot> outline,
                                               std::span<const PlanSlot> hourly) const override;
  std::optional<std::string> propose_plan_change(const CallSite& site,
                                                 const ReplanRequest& req) const override;
  std::vector<PlanSlot> regenerate_remaining_plan(const CallSite& site, const ReplanRequest& req,
                                                  std::string_view change) const override;
  std::string choose_location(const CallSite& site, const LocationRequest& req) const override;
  std::optional<std::string> decide_dialogue(const CallSite& site,
                                             const DialogueContext& ctx) const override;
  std::optional<std::string> next_utterance(const CallSite& site, const DialogueContext& ctx,
                                            std::span<const Turn> history) const override;

 private:
  template <typename F>
  auto audited(std::string_view op, const CallSite& site, const std::string& input, F&& call,
               std::function<std::string(const decltype(call())&)> describe) const
      -> decltype(call());
  void record(CallRecord rec) const;

  const CognitionProvider& inner_;
  mutable std::mutex mu_;
  mutable std::vector<CallRecord> records_;
  mutable std::map<std::string, std::size_t, std::less<>> counts_;
  Listener listener_;
};

std::string describe_slots(std::span<const PlanSlot> slots);

}  // namespace humanoid
