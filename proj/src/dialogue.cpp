#include "humanoid/dialogue.hpp"

#include "humanoid/log.hpp"
#include "humanoid/needs.hpp"

namespace humanoid {

DialogueContext make_dialogue_context(const AgentState& self, const AgentState& other,
                                      std::string topic,
                                      std::optional<int> minutes_since_last_talk) {
  DialogueContext ctx;
  ctx.self = self.profile;
  ctx.other = other.name();
  ctx.self_activity = self.current_activity;
  ctx.other_activity = other.current_activity;
  ctx.internal_state = format_internal_state(self);
  ctx.closeness = self.closeness_to(other.name());
  ctx.topic = std::move(topic);
  ctx.minutes_since_last_talk = minutes_since_last_talk;
  return ctx;
}

std::optional<std::string> maybe_initiate(const AgentState& a, const AgentState& b,
                                          const CognitionProvider& provider, const CallSite& site,
                                          bool either_conversing,
                                          std::optional<int> minutes_since_last_talk) {
  if (either_conversing || a.name() == b.name()) return std::nullopt;
  try {
    auto topic = provider.decide_dialogue(site, make_dialogue_context(a, b, {}, minutes_since_last_talk));
    if (topic && topic->empty()) return std::nullopt;
    return topic;
  } catch (const std::exception& e) {
    logger().warn("dialogue decision for {} -> {} failed: {}", a.name(), b.name(), e.what());
    return std::nullopt;
  }
}

Conversation run_conversation(const AgentState& initiator, const AgentState& partner,
                              const std::string& topic, const CognitionProvider& provider,
                              const CallSite& site) {
  Conversation conv;
  conv.participants = {initiator.name(), partner.name()};
  conv.topic = topic;
  conv.day = site.day;
  conv.step_started = site.step;

  const std::array<const AgentState*, 2> speakers = {&initiator, &partner};
  while (conv.turns.size() < static_cast<std::size_t>(kMaxConversationTurns)) {
    const AgentState& self = *speakers[conv.turns.size() % 2];
    const AgentState& other = *speakers[(conv.turns.size() + 1) % 2];
    std::optional<std::string> line;
    try {
      CallSite s = site;
      s.agent = self.name();
      line = provider.next_utterance(s, make_dialogue_context(self, other, topic), conv.turns);
    } catch (const std::exception& e) {
      logger().warn("conversation between {} and {} cut short: {}", initiator.name(), partner.name(),
                    e.what());
      break;
    }
    if (!line || line->empty()) break;
    conv.turns.push_back({self.name(), std::move(*line), std::nullopt});
  }
  return conv;
}

ConversationOutcome apply_outcome(Conversation& conv, AgentState& a, AgentState& b,
                                  const CognitionProvider& provider, const CallSite& site,
                                  bool update_emotion) {
  ConversationOutcome out;
  const std::string transcript = conv.transcript();
  std::array<AgentState*, 2> people = {&a, &b};

  for (int i = 0; i < 2; ++i) {
    AgentState& self = *people[i];
    const AgentState& other = *people[1 - i];
    CallSite s = site;
    s.agent = self.name();
    try {
      const bool enjoyed = provider.judge_enjoyment(s, transcript, self.name());
      conv.enjoyed[i] = enjoyed;
      const int before = self.closeness_to(other.name());
      self.set_closeness(other.name(), before + (enjoyed ? 1 : -1));
      out.closeness_delta[i] = self.closeness_to(other.name()) - before;
    } catch (const std::exception& e) {
      logger().warn("enjoyment judgement for {} failed, closeness unchanged: {}", self.name(), e.what());
    }
  }

  if (!update_emotion) return out;
  for (int i = 0; i < 2; ++i) {
    AgentState& self = *people[i];
    CallSite s = site;
    s.agent = self.name();
    try {
      const std::string text = "talking with " + people[1 - i]->name() + " about " + conv.topic +
                               "\n" + transcript;
      const Emotion e = provider.classify_emotion(s, text);
      self.emotion = e;
      out.emotion_after[i] = e;
    } catch (const std::exception& e) {
      logger().warn("post-conversation emotion for {} failed: {}", self.name(), e.what());
    }
  }
  return out;
}

}  // namespace humanoid
