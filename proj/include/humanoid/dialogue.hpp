#pragma once

#include <array>
#include <optional>
#include <string>

#include "humanoid/cognition.hpp"
#include "humanoid/domain.hpp"

namespace humanoid {

/// Dialogue context for `self` speaking to `other`, built from current state.
DialogueContext make_dialogue_context(const AgentState& self, const AgentState& other,
                                      std::string topic = {},
                                      std::optional<int> minutes_since_last_talk = std::nullopt);

/// Topic `a` wants to raise with `b`, if any. Returns absent without asking the
/// provider when either agent is already in a conversation; provider errors
/// also yield absent.
std::optional<std::string> maybe_initiate(const AgentState& a, const AgentState& b,
                                          const CognitionProvider& provider, const CallSite& site,
                                          bool either_conversing = false,
                                          std::optional<int> minutes_since_last_talk = std::nullopt);

/// Alternating turns starting with the initiator until a speaker declines, a
/// provider call fails, or the ten-turn cap is hit.
Conversation run_conversation(const AgentState& initiator, const AgentState& partner,
                              const std::string& topic, const CognitionProvider& provider,
                              const CallSite& site);

struct ConversationOutcome {
  std::array<int, 2> closeness_delta{0, 0};  // participants[i] -> other
  std::array<std::optional<Emotion>, 2> emotion_after;
};

/// Each participant judges the conversation independently: enjoyed moves
/// closeness toward the other up by one, otherwise down by one (clamped).
/// Emotion is then re-classified unless `update_emotion` is false. Fills
/// conv.enjoyed. `a` must be participants[0] and `b` participants[1].
ConversationOutcome apply_outcome(Conversation& conv, AgentState& a, AgentState& b,
                                  const CognitionProvider& provider, const CallSite& site,
                                  bool update_emotion = true);

}  // namespace humanoid
