#include "humanoid/cognition.hpp"

#include <algorithm>

#include "humanoid/text.hpp"

namespace humanoid {

std::vector<PlanSlot> ReplanRequest::remaining() const {
  std::vector<PlanSlot> out;
  std::copy_if(plan.begin(), plan.end(), std::back_inserter(out),
               [&](const PlanSlot& s) { return s.start >= now; });
  return out;
}

std::string LocationRequest::root_of(std::string_view location) const {
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (locations[i] == location) return i < roots.size() ? roots[i] : locations[i];
  }
  return std::string(location);
}

std::string DialogueContext::closeness_description() const {
  return self.name + " is feeling " + std::string(to_string(closeness_label(closeness))) + " to " +
         other;
}

std::string describe_slots(std::span<const PlanSlot> slots) {
  std::string out;
  for (const auto& s : slots) {
    out += s.start.str() + "-" + s.end.str() + " " + s.activity + "\n";
  }
  return out;
}

namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string opt_text(const std::optional<std::string>& s) { return s ? *s : std::string("<none>"); }

std::string context_text(const DialogueContext& ctx) {
  std::string s = ctx.self.name + "|" + ctx.other + "|" + ctx.self_activity + "|" +
                  ctx.other_activity + "|" + opt_text(ctx.internal_state) + "|" +
                  std::to_string(ctx.closeness) + "|" + ctx.topic;
  if (ctx.minutes_since_last_talk) s += "|" + std::to_string(*ctx.minutes_since_last_talk);
  return s;
}

}  // namespace

void AuditedProvider::set_listener(Listener l) {
  std::lock_guard lock(mu_);
  listener_ = std::move(l);
}

std::vector<CallRecord> AuditedProvider::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t AuditedProvider::count(std::string_view op) const {
  std::lock_guard lock(mu_);
  auto it = counts_.find(op);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t AuditedProvider::total() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

void AuditedProvider::clear() {
  std::lock_guard lock(mu_);
  records_.clear();
  counts_.clear();
}

void AuditedProvider::record(CallRecord rec) const {
  Listener l;
  {
    std::lock_guard lock(mu_);
    ++counts_[rec.op];
    records_.push_back(rec);
    l = listener_;
  }
  if (l) l(rec);
}

template <typename F>
auto AuditedProvider::audited(std::string_view op, const CallSite& site, const std::string& input,
                              F&& call, std::function<std::string(const decltype(call())&)> describe)
    const -> decltype(call()) {
  CallRecord rec{std::string(op), site, text::hex64(text::fnv1a(input)), {}, false};
  try {
    auto result = call();
    rec.outcome = describe(result);
    record(std::move(rec));
    return result;
  } catch (const std::exception& e) {
    rec.outcome = std::string("error: ") + e.what();
    rec.failed = true;
    record(std::move(rec));
    throw;
  }
}

bool AuditedProvider::classify_need_satisfaction(const CallSite& site, std::string_view activity,
                                                 Need need) const {
  return audited(
      "classify_need_satisfaction", site, std::string(activity) + "|" + std::string(to_string(need)),
      [&] { return inner_.classify_need_satisfaction(site, activity, need); },
      [&](const bool& b) { return std::string(to_string(need)) + "=" + yes_no(b); });
}

Emotion AuditedProvider::classify_emotion(const CallSite& site, std::string_view activity) const {
  return audited(
      "classify_emotion", site, std::string(activity),
      [&] { return inner_.classify_emotion(site, activity); },
      [](const Emotion& e) { return std::string(to_string(e)); });
}

bool AuditedProvider::judge_enjoyment(const CallSite& site, std::string_view transcript,
                                      std::string_view name) const {
  return audited(
      "judge_enjoyment", site, std::string(transcript) + "|" + std::string(name),
      [&] { return inner_.judge_enjoyment(site, transcript, name); },
      [](const bool& b) { return yes_no(b); });
}

bool AuditedProvider::classify_sentiment(const CallSite& site, std::string_view utterance) const {
  return audited(
      "classify_sentiment", site, std::string(utterance),
      [&] { return inner_.classify_sentiment(site, utterance); },
      [](const bool& b) { return b ? std::string("positive") : std::string("not positive"); });
}

std::vector<PlanSlot> AuditedProvider::generate_day_outline(const CallSite& site,
                                                            const PlanningRequest& req) const {
  return audited(
      "generate_day_outline", site, req.profile.name + "|" + req.date + "|" + req.profile.example_day_plan,
      [&] { return inner_.generate_day_outline(site, req); },
      [](const std::vector<PlanSlot>& v) { return std::to_string(v.size()) + " slots"; });
}

std::vector<PlanSlot> AuditedProvider::refine_to_hourly(const CallSite& site,
                                                        const PlanningRequest& req,
                                                        std::span<const PlanSlot> outline) const {
  return audited(
      "refine_to_hourly", site, req.profile.name + "|" + describe_slots(outline),
      [&] { return inner_.refine_to_hourly(site, req, outline); },
      [](const std::vector<PlanSlot>& v) { return std::to_string(v.size()) + " slots"; });
}

std::vector<PlanSlot> AuditedProvider::refine_to_quarter_hour(const CallSite& site,
                                                              const PlanningRequest& req,
                                                              std::span<const PlanSlot> outline,
                                                              std::span<const PlanSlot> hourly) const {
  return audited(
      "refine_to_quarter_hour", site, req.profile.name + "|" + describe_slots(hourly),
      [&] { return inner_.refine_to_quarter_hour(site, req, outline, hourly); },
      [](const std::vector<PlanSlot>& v) { return std::to_string(v.size()) + " slots"; });
}

std::optional<std::string> AuditedProvider::propose_plan_change(const CallSite& site,
                                                                const ReplanRequest& req) const {
  const auto remaining = req.remaining();
  return audited(
      "propose_plan_change", site,
      req.name + "|" + req.internal_state + "|" + req.now.str() + "|" + describe_slots(remaining),
      [&] { return inner_.propose_plan_change(site, req); },
      [](const std::optional<std::string>& s) { return opt_text(s); });
}

std::vector<PlanSlot> AuditedProvider::regenerate_remaining_plan(const CallSite& site,
                                                                 const ReplanRequest& req,
                                                                 std::string_view change) const {
  const auto remaining = req.remaining();
  return audited(
      "regenerate_remaining_plan", site,
      req.name + "|" + std::string(change) + "|" + describe_slots(remaining),
      [&] { return inner_.regenerate_remaining_plan(site, req, change); },
      [](const std::vector<PlanSlot>& v) { return std::to_string(v.size()) + " slots"; });
}

std::string AuditedProvider::choose_location(const CallSite& site, const LocationRequest& req) const {
  return audited(
      "choose_location", site,
      req.agent + "|" + req.activity + "|" + req.previous_location + "|" + text::join(req.locations, ";"),
      [&] { return inner_.choose_location(site, req); },
      [](const std::string& s) { return s; });
}

std::optional<std::string> AuditedProvider::decide_dialogue(const CallSite& site,
                                                            const DialogueContext& ctx) const {
  return audited(
      "decide_dialogue", site, context_text(ctx),
      [&] { return inner_.decide_dialogue(site, ctx); },
      [](const std::optional<std::string>& s) { return opt_text(s); });
}

std::optional<std::string> AuditedProvider::next_utterance(const CallSite& site,
                                                           const DialogueContext& ctx,
                                                           std::span<const Turn> history) const {
  std::string input = context_text(ctx);
  for (const auto& t : history) input += "|" + t.speaker + ":" + t.text;
  return audited(
      "next_utterance", site, input,
      [&] { return inner_.next_utterance(site, ctx, history); },
      [](const std::optional<std::string>& s) { return opt_text(s); });
}

}  // namespace humanoid
