#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "humanoid/cognition.hpp"

namespace humanoid {

struct Lexicon {
  std::vector<std::string> keywords;
  std::vector<std::string> excludes;

  bool matches(const std::vector<std::string>& tokens) const;
};

struct ReplanRule {
  std::string trigger;  // keyword looked up in the internal-state text
  std::optional<Need> need;
  std::optional<Emotion> emotion;
  std::string change;
  std::string insert;  // may contain {activity}
  int slots = 1;
  int max_per_day = 0;  // 0 = unlimited
};

struct Decomposition {
  std::string keyword;
  std::vector<std::string> steps;
};

struct LocationRule {
  std::vector<std::string> keywords;
  std::vector<std::string> hints;
};

struct DialogueRules {
  int cooldown_minutes = 60;
  std::string lonely_topic;
  std::string social_topic;
  std::map<ClosenessLabel, int> turn_limits;
  int turn_jitter = 0;
  std::map<ClosenessLabel, std::string> template_class;
  std::map<std::string, std::vector<std::string>> templates;
};

/// Rule tables behind the scripted provider. Shipped as data so behaviour can
/// be pinned by tests without code changes.
struct ScriptedRules {
  std::string version;
  std::map<Need, Lexicon> need_lexicons;
  std::vector<std::pair<Emotion, std::vector<std::string>>> emotion_lexicon;  // first match wins
  std::vector<std::string> sleep_keywords;
  std::vector<std::string> positive_words;
  std::vector<std::string> negative_words;
  std::string wake_activity;
  std::string default_day_plan;
  std::vector<Decomposition> decompositions;
  std::vector<ReplanRule> replan_rules;
  std::vector<LocationRule> location_rules;
  DialogueRules dialogue;

  static ScriptedRules load(const std::filesystem::path& path);
  static ScriptedRules from_json_text(const std::string& json_text);
};

/// Directory holding the bundled data files (rules, prompts, worlds).
std::filesystem::path default_data_root();
std::filesystem::path default_rules_path();

/// Parses "HH:MM activity" entries separated by newlines or ';'. Entries
/// without a leading time are skipped.
std::vector<std::pair<TimeOfDay, std::string>> parse_timed_entries(std::string_view plan_text);

/// Deterministic rule-based provider. Every answer is a pure function of the
/// inputs, the rule tables and the seed.
class ScriptedProvider : public CognitionProvider {
 public:
  explicit ScriptedProvider(ScriptedRules rules, std::uint64_t seed = 0);

  const ScriptedRules& rules() const { return rules_; }
  std::uint64_t seed() const { return seed_; }

  bool is_sleeping(std::string_view activity) const;

  ProviderIdentity identity() const override;
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
  const ReplanRule* select_rule(const ReplanRequest& req) const;
  int turn_limit(const DialogueContext& ctx) const;

  ScriptedRules rules_;
  std::uint64_t seed_;
};

}  // namespace humanoid
