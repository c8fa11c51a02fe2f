#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "humanoid/cognition.hpp"
#include "humanoid/prompts.hpp"

namespace humanoid {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
};

/// A failed chat call. `retryable` covers transport failures, 429 and 5xx.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, int status, bool retryable)
      : std::runtime_error(what), status_(status), retryable_(retryable) {}
  int status() const { return status_; }
  bool retryable() const { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

/// Sends one chat request and returns the first assistant message's text.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const ChatRequest& request) const = 0;
};

/// OpenAI-style POST {base_url}/chat/completions.
class HttpChatTransport final : public ChatTransport {
 public:
  HttpChatTransport(std::string base_url, std::string api_key,
                    std::chrono::milliseconds timeout = std::chrono::seconds(30));
  std::string complete(const ChatRequest& request) const override;

 private:
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

struct RemoteConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  std::string api_key_env = "HUMANOID_API_KEY";
  double generation_temperature = 1.0;  // classification calls always use 0
  int max_in_flight = 4;
  int retries = 3;
  std::chrono::milliseconds initial_backoff = std::chrono::seconds(1);  // doubles per retry
  std::chrono::milliseconds timeout = std::chrono::seconds(30);
  int max_reasks = 2;
  std::size_t history_turns = 8;  // most recent turns included in dialogue prompts
};

/// Chat-model provider. Classification replies are parsed into their closed
/// label sets; malformed answers are re-asked, then fall back conservatively.
class RemoteProvider final : public CognitionProvider {
 public:
  RemoteProvider(RemoteConfig config, PromptLibrary prompts, std::shared_ptr<const ChatTransport> transport);

  /// Reads the API key from config.api_key_env; throws ProviderError when unset.
  static std::unique_ptr<RemoteProvider> from_environment(RemoteConfig config, PromptLibrary prompts);

  const RemoteConfig& config() const { return config_; }

  ProviderIdentity identity() const override;
  bool classify_need_satisfaction(const CallSite& site, std::string_view activity, Need need) const override;
  Emotion classify_emotion(const CallSite& site, std::string_view activity) const override;
  bool judge_enjoyment(const CallSite& site, std::string_view transcript, std::string_view name) const override;
  bool classify_sentiment(const CallSite& site, std::string_view utterance) const override;
  std::vector<PlanSlot> generate_day_outline(const CallSite& site, const PlanningRequest& req) const override;
  std::vector<PlanSlot> refine_to_hourly(const CallSite& site, const PlanningRequest& req,
                                         std::span<const PlanSlot> outline) const override;
  std::vector<PlanSlot> refine_to_quarter_hour(const CallSite& site, const PlanningRequest& req,
                                               std::span<const PlanSlot> outline,
                                               std::span<const PlanSlot> hourly) const override;
  std::optional<std::string> propose_plan_change(const CallSite& site, const ReplanRequest& req) const override;
  std::vector<PlanSlot> regenerate_remaining_plan(const CallSite& site, const ReplanRequest& req,
                                                  std::string_view change) const override;
  std::string choose_location(const CallSite& site, const LocationRequest& req) const override;
  std::optional<std::string> decide_dialogue(const CallSite& site, const DialogueContext& ctx) const override;
  std::optional<std::string> next_utterance(const CallSite& site, const DialogueContext& ctx,
                                            std::span<const Turn> history) const override;

 private:
  std::string chat(const std::string& prompt, double temperature) const;
  bool ask_yes_no(const std::string& prompt) const;
  std::vector<PlanSlot> ask_plan(const std::string& prompt, TimeOfDay end) const;

  RemoteConfig config_;
  PromptLibrary prompts_;
  std::shared_ptr<const ChatTransport> transport_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  mutable int in_flight_ = 0;
};

/// First alphabetic token as yes/no, case-insensitive.
std::optional<bool> parse_yes_no(std::string_view reply);
/// First alphabetic token as an emotion label.
std::optional<Emotion> parse_emotion_reply(std::string_view reply);
/// "HH:MM activity" lines into contiguous slots ending at `end`.
std::vector<PlanSlot> parse_plan_reply(std::string_view reply, TimeOfDay end);

}  // namespace humanoid
