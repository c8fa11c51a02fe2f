#include "humanoid/scripted_provider.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "humanoid/text.hpp"

#ifndef HUMANOID_DATA_ROOT
#define HUMANOID_DATA_ROOT "."
#endif

namespace humanoid {

using nlohmann::json;

bool Lexicon::matches(const std::vector<std::string>& tokens) const {
  return text::contains_any(tokens, keywords) && !text::contains_any(tokens, excludes);
}

std::filesystem::path default_data_root() {
  if (const char* env = std::getenv("HUMANOID_DATA_ROOT"); env && *env) return env;
  return HUMANOID_DATA_ROOT;
}

std::filesystem::path default_rules_path() { return default_data_root() / "data" / "scripted_rules.json"; }

namespace {

ClosenessLabel parse_label(const std::string& s) {
  for (auto l : {ClosenessLabel::Distant, ClosenessLabel::RatherClose, ClosenessLabel::Close,
                 ClosenessLabel::VeryClose}) {
    if (to_string(l) == s) return l;
  }
  throw DomainError("unknown closeness label '" + s + "'");
}

std::vector<std::string> strings(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<std::string>>();
}

std::string substitute(std::string s, const std::map<std::string, std::string>& vars) {
  for (const auto& [k, v] : vars) {
    const std::string key = "{" + k + "}";
    for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + v.size())) {
      s.replace(pos, key.size(), v);
    }
  }
  return s;
}

std::string literal_prefix(const std::string& s) { return s.substr(0, s.find('{')); }

const PlanSlot* slot_at(std::span<const PlanSlot> slots, TimeOfDay t) {
  for (const auto& s : slots) {
    if (s.contains(t)) return &s;
  }
  return nullptr;
}

}  // namespace

ScriptedRules ScriptedRules::from_json_text(const std::string& json_text) {
  const json j = json::parse(json_text);
  ScriptedRules r;
  r.version = j.at("version").get<std::string>();
  for (const auto& [name, lex] : j.at("need_lexicons").items()) {
    r.need_lexicons[parse_need(name)] = Lexicon{strings(lex, "keywords"), strings(lex, "excludes")};
  }
  for (const auto& entry : j.at("emotion_lexicon")) {
    r.emotion_lexicon.emplace_back(parse_emotion(entry.at("emotion").get<std::string>()),
                                   strings(entry, "keywords"));
  }
  r.sleep_keywords = strings(j, "sleep_keywords");
  r.positive_words = strings(j.at("sentiment"), "positive");
  r.negative_words = strings(j.at("sentiment"), "negative");
  r.wake_activity = j.at("wake_activity").get<std::string>();
  r.default_day_plan = j.at("default_day_plan").get<std::string>();
  for (const auto& d : j.value("decompositions", json::array())) {
    r.decompositions.push_back({d.at("keyword").get<std::string>(), strings(d, "steps")});
  }
  for (const auto& rule : j.at("replan_rules")) {
    ReplanRule rr;
    rr.trigger = rule.at("trigger").get<std::string>();
    if (rule.contains("need")) rr.need = parse_need(rule.at("need").get<std::string>());
    if (rule.contains("emotion")) rr.emotion = parse_emotion(rule.at("emotion").get<std::string>());
    rr.change = rule.at("change").get<std::string>();
    rr.insert = rule.at("insert").get<std::string>();
    rr.slots = rule.value("slots", 1);
    rr.max_per_day = rule.value("max_per_day", 0);
    r.replan_rules.push_back(std::move(rr));
  }
  for (const auto& rule : j.at("location_rules")) {
    r.location_rules.push_back({strings(rule, "keywords"), strings(rule, "hints")});
  }
  const auto& d = j.at("dialogue");
  r.dialogue.cooldown_minutes = d.at("cooldown_minutes").get<int>();
  r.dialogue.lonely_topic = d.at("lonely_topic").get<std::string>();
  r.dialogue.social_topic = d.at("social_topic").get<std::string>();
  for (const auto& [label, limit] : d.at("turn_limits").items()) {
    r.dialogue.turn_limits[parse_label(label)] = limit.get<int>();
  }
  r.dialogue.turn_jitter = d.value("turn_jitter", 0);
  for (const auto& [label, cls] : d.at("template_class").items()) {
    r.dialogue.template_class[parse_label(label)] = cls.get<std::string>();
  }
  for (const auto& [cls, lines] : d.at("templates").items()) {
    r.dialogue.templates[cls] = lines.get<std::vector<std::string>>();
  }
  return r;
}

ScriptedRules ScriptedRules::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scripted rules file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::vector<std::pair<TimeOfDay, std::string>> parse_timed_entries(std::string_view plan_text) {
  static const std::regex entry(R"(^\s*(\d{1,2}:\d{2})\s*[-:,.]?\s+(.+?)\s*$)");
  std::vector<std::pair<TimeOfDay, std::string>> out;
  std::string normalized(plan_text);
  std::replace(normalized.begin(), normalized.end(), ';', '\n');
  std::istringstream in(normalized);
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_match(line, m, entry)) continue;
    auto t = TimeOfDay::try_parse(m[1].str());
    if (!t) continue;
    out.emplace_back(*t, m[2].str());
  }
  return out;
}

ScriptedProvider::ScriptedProvider(ScriptedRules rules, std::uint64_t seed)
    : rules_(std::move(rules)), seed_(seed) {}

ProviderIdentity ScriptedProvider::identity() const { return {"scripted", rules_.version}; }

bool ScriptedProvider::is_sleeping(std::string_view activity) const {
  return text::contains_any(text::words(activity), rules_.sleep_keywords);
}

bool ScriptedProvider::classify_need_satisfaction(const CallSite&, std::string_view activity,
                                                  Need need) const {
  const auto tokens = text::words(activity);
  if (tokens.empty()) return false;
  auto it = rules_.need_lexicons.find(need);
  return it != rules_.need_lexicons.end() && it->second.matches(tokens);
}

Emotion ScriptedProvider::classify_emotion(const CallSite&, std::string_view activity) const {
  const auto tokens = text::words(activity);
  for (const auto& [emotion, keywords] : rules_.emotion_lexicon) {
    if (text::contains_any(tokens, keywords)) return emotion;
  }
  return Emotion::Neutral;
}

bool ScriptedProvider::classify_sentiment(const CallSite&, std::string_view utterance) const {
  const auto tokens = text::words(utterance);
  auto count = [&](const std::vector<std::string>& lexicon) {
    return std::count_if(lexicon.begin(), lexicon.end(),
                         [&](const std::string& k) { return text::contains_keyword(tokens, k); });
  };
  return count(rules_.positive_words) > count(rules_.negative_words);
}

bool ScriptedProvider::judge_enjoyment(const CallSite& site, std::string_view transcript,
                                       std::string_view name) const {
  int heard = 0;
  int positive = 0;
  for (const auto& line : text::split(transcript, '\n')) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    if (std::string_view(line).substr(0, colon) == name) continue;
    ++heard;
    if (classify_sentiment(site, std::string_view(line).substr(colon + 2))) ++positive;
  }
  return heard > 0 && positive * 2 >= heard;
}

std::vector<PlanSlot> ScriptedProvider::generate_day_outline(const CallSite&,
                                                             const PlanningRequest& req) const {
  const auto& frame = req.frame;
  auto entries = parse_timed_entries(req.profile.example_day_plan);
  if (entries.empty()) entries = parse_timed_entries(rules_.default_day_plan);

  std::map<int, std::string> by_start;
  for (auto& [t, activity] : entries) {
    const TimeOfDay start = std::max(t, frame.start);
    if (start >= frame.end) continue;
    // Snap to the step grid.
    const int offset = (start.minutes() - frame.start.minutes()) / frame.step_minutes;
    by_start[frame.start.minutes() + offset * frame.step_minutes] = activity;
  }
  if (by_start.empty() || by_start.begin()->first != frame.start.minutes()) {
    by_start[frame.start.minutes()] = rules_.wake_activity;
  }

  std::vector<PlanSlot> outline;
  for (auto it = by_start.begin(); it != by_start.end(); ++it) {
    auto next = std::next(it);
    const TimeOfDay end = next == by_start.end() ? frame.end : TimeOfDay(next->first);
    outline.push_back({TimeOfDay(it->first), end, it->second});
  }
  return outline;
}

std::vector<PlanSlot> ScriptedProvider::refine_to_hourly(const CallSite&, const PlanningRequest& req,
                                                         std::span<const PlanSlot> outline) const {
  std::vector<PlanSlot> hourly;
  for (int h = 0; h < req.frame.hours(); ++h) {
    const TimeOfDay t = req.frame.start + h * 60;
    const PlanSlot* s = slot_at(outline, t);
    hourly.push_back({t, t + 60, s ? s->activity : rules_.wake_activity});
  }
  return hourly;
}

std::vector<PlanSlot> ScriptedProvider::refine_to_quarter_hour(const CallSite&,
                                                               const PlanningRequest& req,
                                                               std::span<const PlanSlot> outline,
                                                               std::span<const PlanSlot> hourly) const {
  const auto& frame = req.frame;
  std::vector<PlanSlot> quarter;
  for (int k = 0; k < frame.steps(); ++k) {
    const TimeOfDay t = frame.time_of_step(k);
    std::string activity;
    int index_in_entry = 0;
    if (const PlanSlot* s = slot_at(outline, t)) {
      activity = s->activity;
      index_in_entry = (t.minutes() - s->start.minutes()) / frame.step_minutes;
    } else if (const PlanSlot* h = slot_at(hourly, t)) {
      activity = h->activity;
    } else {
      activity = rules_.wake_activity;
    }
    const auto tokens = text::words(activity);
    for (const auto& d : rules_.decompositions) {
      if (!d.steps.empty() && text::contains_keyword(tokens, d.keyword)) {
        activity = d.steps[std::min<std::size_t>(index_in_entry, d.steps.size() - 1)];
        break;
      }
    }
    quarter.push_back({t, t + frame.step_minutes, std::move(activity)});
  }
  return quarter;
}

const ReplanRule* ScriptedProvider::select_rule(const ReplanRequest& req) const {
  const auto remaining = req.remaining();
  if (remaining.empty()) return nullptr;
  const auto& next = remaining.front();
  if (is_sleeping(next.activity)) return nullptr;

  const auto state_tokens = text::words(req.internal_state);
  const auto next_tokens = text::words(next.activity);
  const CallSite none{};
  for (const auto& rule : rules_.replan_rules) {
    if (!text::contains_keyword(state_tokens, rule.trigger)) continue;
    if (rule.need && classify_need_satisfaction(none, next.activity, *rule.need)) continue;
    if (rule.emotion && classify_emotion(none, next.activity) == *rule.emotion) continue;
    if (rule.max_per_day > 0) {
      const auto prefix = literal_prefix(rule.insert);
      const auto used = std::count_if(req.plan.begin(), req.plan.end(), [&](const PlanSlot& s) {
        return s.activity.rfind(prefix, 0) == 0;
      });
      if (used >= rule.max_per_day) continue;
    }
    return &rule;
  }
  return nullptr;
}

std::optional<std::string> ScriptedProvider::propose_plan_change(const CallSite&,
                                                                 const ReplanRequest& req) const {
  if (const ReplanRule* rule = select_rule(req)) return rule->change;
  return std::nullopt;
}

std::vector<PlanSlot> ScriptedProvider::regenerate_remaining_plan(const CallSite&,
                                                                  const ReplanRequest& req,
                                                                  std::string_view change) const {
  auto remaining = req.remaining();
  auto it = std::find_if(rules_.replan_rules.begin(), rules_.replan_rules.end(),
                         [&](const ReplanRule& r) { return r.change == change; });
  if (it == rules_.replan_rules.end()) return remaining;
  const int n = std::min<int>(it->slots, static_cast<int>(remaining.size()));
  for (int i = 0; i < n; ++i) {
    remaining[i].activity = substitute(it->insert, {{"activity", remaining[i].activity}});
  }
  return remaining;
}

std::string ScriptedProvider::choose_location(const CallSite&, const LocationRequest& req) const {
  if (req.locations.empty()) return req.previous_location;
  if (req.locations.size() == 1) return req.locations.front();

  // An activity that names a location goes there; the longest name wins.
  const std::string activity = text::to_lower(req.activity);
  const std::string* named = nullptr;
  for (const auto& loc : req.locations) {
    if (activity.find(text::to_lower(loc)) != std::string::npos &&
        (!named || loc.size() > named->size())) {
      named = &loc;
    }
  }
  if (named) return *named;

  const auto tokens = text::words(req.activity);
  const auto agent_words = text::words(req.agent);
  const std::string first_name = agent_words.empty() ? std::string() : agent_words.front();
  const std::string prev_root = req.root_of(req.previous_location);

  for (const auto& rule : rules_.location_rules) {
    if (!text::contains_any(tokens, rule.keywords)) continue;
    const std::string* best = nullptr;
    int best_score = -1;
    for (std::size_t h = 0; h < rule.hints.size(); ++h) {
      for (const auto& loc : req.locations) {
        const auto loc_tokens = text::words(loc);
        if (!text::contains_keyword(loc_tokens, rule.hints[h])) continue;
        int score = 0;
        if (!first_name.empty() && text::contains_keyword(loc_tokens, first_name)) score += 4;
        if (req.root_of(loc) == prev_root) score += 2;
        // Earlier hints outrank later ones at equal ownership.
        score = score * 16 + static_cast<int>(rule.hints.size() - h);
        if (score > best_score) {
          best_score = score;
          best = &loc;
        }
      }
    }
    if (best) return *best;
  }
  return req.previous_location;
}

std::optional<std::string> ScriptedProvider::decide_dialogue(const CallSite& site,
                                                             const DialogueContext& ctx) const {
  if (is_sleeping(ctx.self_activity) || is_sleeping(ctx.other_activity)) return std::nullopt;
  if (ctx.minutes_since_last_talk && *ctx.minutes_since_last_talk < rules_.dialogue.cooldown_minutes) {
    return std::nullopt;
  }
  const std::map<std::string, std::string> vars = {
      {"self", ctx.self.name}, {"other", ctx.other}, {"other_activity", ctx.other_activity}};
  if (ctx.internal_state && text::contains_keyword(text::words(*ctx.internal_state), "lonely")) {
    return substitute(rules_.dialogue.lonely_topic, vars);
  }
  if (classify_need_satisfaction(site, ctx.self_activity, Need::Social) ||
      classify_need_satisfaction(site, ctx.other_activity, Need::Social)) {
    return substitute(rules_.dialogue.social_topic, vars);
  }
  return std::nullopt;
}

int ScriptedProvider::turn_limit(const DialogueContext& ctx) const {
  const auto label = closeness_label(ctx.closeness);
  auto it = rules_.dialogue.turn_limits.find(label);
  int limit = it == rules_.dialogue.turn_limits.end() ? kMaxConversationTurns : it->second;
  if (rules_.dialogue.turn_jitter > 0) {
    const auto& a = std::min(ctx.self.name, ctx.other);
    const auto& b = std::max(ctx.self.name, ctx.other);
    const auto h = text::fnv1a(std::to_string(seed_) + "|" + a + "|" + b + "|" + ctx.topic);
    limit += static_cast<int>(h % static_cast<std::uint64_t>(rules_.dialogue.turn_jitter + 1));
  }
  return limit;
}

std::optional<std::string> ScriptedProvider::next_utterance(const CallSite&, const DialogueContext& ctx,
                                                            std::span<const Turn> history) const {
  const int turn = static_cast<int>(history.size());
  if (turn >= std::min(turn_limit(ctx), kMaxConversationTurns)) return std::nullopt;
  const auto cls = rules_.dialogue.template_class.find(closeness_label(ctx.closeness));
  if (cls == rules_.dialogue.template_class.end()) return std::nullopt;
  const auto lines = rules_.dialogue.templates.find(cls->second);
  if (lines == rules_.dialogue.templates.end() || lines->second.empty()) return std::nullopt;
  const auto& line = lines->second[static_cast<std::size_t>(turn) % lines->second.size()];
  return substitute(line, {{"self", ctx.self.name},
                           {"other", ctx.other},
                           {"topic", ctx.topic},
                           {"self_activity", ctx.self_activity},
                           {"other_activity", ctx.other_activity}});
}

}  // namespace humanoid
