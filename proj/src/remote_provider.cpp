#include "humanoid/remote_provider.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <regex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "humanoid/log.hpp"
#include "humanoid/scripted_provider.hpp"
#include "humanoid/text.hpp"

namespace humanoid {

namespace {

constexpr const char* kReask = "Answer with exactly one word.";

std::string first_line(std::string_view s) {
  const auto t = text::trim(s);
  return text::trim(t.substr(0, t.find('\n')));
}

std::string strip_quotes(std::string s) {
  s = text::trim(s);
  while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(s.begin());
  while (!s.empty() && (s.back() == '"' || s.back() == '\'' || s.back() == '.')) s.pop_back();
  return text::trim(s);
}

std::string profile_text(const AgentProfile& p) {
  std::string s = "Name: " + p.name + " (age " + std::to_string(p.age) + ")\n";
  if (!p.traits.empty()) s += "Innate traits: " + text::join(p.traits, ", ") + "\n";
  s += text::join(p.description, " ");
  if (!p.life_outlook.empty()) s += "\n" + p.name + " feels " + p.life_outlook + ".";
  return s;
}

std::map<std::string, std::string> planning_vars(const PlanningRequest& req) {
  return {{"name", req.profile.name},
          {"age", std::to_string(req.profile.age)},
          {"traits", text::join(req.profile.traits, ", ")},
          {"description", text::join(req.profile.description, " ")},
          {"example_day_plan", req.profile.example_day_plan},
          {"date", req.date},
          {"day_start", req.frame.start.str()},
          {"day_end", req.frame.end.str()},
          {"step_minutes", std::to_string(req.frame.step_minutes)}};
}

std::string plan_lines(std::span<const PlanSlot> slots) {
  std::string out;
  for (const auto& s : slots) out += s.start.str() + " " + s.activity + "\n";
  return out;
}

std::map<std::string, std::string> dialogue_vars(const DialogueContext& ctx) {
  std::string last_talk;
  if (ctx.minutes_since_last_talk) {
    last_talk = "They last talked " + std::to_string(*ctx.minutes_since_last_talk) + " minutes ago.";
  }
  return {{"self_profile", profile_text(ctx.self)},
          {"internal_state", ctx.internal_state ? *ctx.internal_state + "." : std::string()},
          {"closeness", ctx.closeness_description()},
          {"name", ctx.self.name},
          {"other", ctx.other},
          {"self_activity", ctx.self_activity},
          {"other_activity", ctx.other_activity},
          {"topic", ctx.topic},
          {"last_talk", last_talk}};
}

}  // namespace

std::optional<bool> parse_yes_no(std::string_view reply) {
  const auto w = text::first_word(reply);
  if (w == "yes") return true;
  if (w == "no") return false;
  return std::nullopt;
}

std::optional<Emotion> parse_emotion_reply(std::string_view reply) {
  return try_parse_emotion(text::first_word(reply));
}

std::vector<PlanSlot> parse_plan_reply(std::string_view reply, TimeOfDay end) {
  auto entries = parse_timed_entries(reply);
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<PlanSlot> slots;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const TimeOfDay start = entries[i].first;
    const TimeOfDay stop = i + 1 < entries.size() ? entries[i + 1].first : end;
    if (stop <= start) continue;
    slots.push_back({start, stop, strip_quotes(entries[i].second)});
  }
  if (slots.empty()) throw ProviderError("reply contained no \"HH:MM activity\" entries");
  return slots;
}

// ---------------------------------------------------------------------------

HttpChatTransport::HttpChatTransport(std::string base_url, std::string api_key, std::chrono::milliseconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(base_url, m, url)) throw ProviderError("invalid base URL '" + base_url + "'");
  scheme_host_port_ = m[1].str();
  path_prefix_ = m[2].str();
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpChatTransport::complete(const ChatRequest& request) const {
  nlohmann::json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : request.messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});

  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(path_prefix_ + "/chat/completions", headers, body.dump(), "application/json");
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()), 0, true);
  if (res->status == 429 || res->status >= 500) {
    throw TransportError("server returned HTTP " + std::to_string(res->status), res->status, true);
  }
  if (res->status != 200) {
    throw TransportError("server returned HTTP " + std::to_string(res->status) + ": " + res->body, res->status,
                         false);
  }
  try {
    const auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what(), res->status, false);
  }
}

// ---------------------------------------------------------------------------

RemoteProvider::RemoteProvider(RemoteConfig config, PromptLibrary prompts,
                               std::shared_ptr<const ChatTransport> transport)
    : config_(std::move(config)), prompts_(std::move(prompts)), transport_(std::move(transport)) {
  if (!transport_) throw std::invalid_argument("RemoteProvider needs a transport");
  if (config_.max_in_flight < 1) throw std::invalid_argument("max_in_flight must be at least 1");
}

std::unique_ptr<RemoteProvider> RemoteProvider::from_environment(RemoteConfig config, PromptLibrary prompts) {
  const char* key = std::getenv(config.api_key_env.c_str());
  if (!key || !*key) throw ProviderError("environment variable " + config.api_key_env + " is not set");
  auto transport = std::make_shared<HttpChatTransport>(config.base_url, key, config.timeout);
  return std::make_unique<RemoteProvider>(std::move(config), std::move(prompts), std::move(transport));
}

ProviderIdentity RemoteProvider::identity() const { return {"llm", config_.model}; }

std::string RemoteProvider::chat(const std::string& prompt, double temperature) const {
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    const RemoteProvider* self;
    ~Release() {
      {
        std::lock_guard lock(self->mu_);
        --self->in_flight_;
      }
      self->cv_.notify_one();
    }
  } release{this};

  const ChatRequest request{config_.model, {{"user", prompt}}, temperature};
  auto backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      return transport_->complete(request);
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt >= config_.retries) {
        throw ProviderError(std::string("chat request failed: ") + e.what());
      }
      logger().warn("chat request failed ({}), retrying in {} ms", e.what(), backoff.count());
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
}

bool RemoteProvider::ask_yes_no(const std::string& prompt) const {
  std::string reply = chat(prompt, 0.0);
  for (int i = 0;; ++i) {
    if (auto answer = parse_yes_no(reply)) return *answer;
    if (i >= config_.max_reasks) break;
    reply = chat(prompt + " " + kReask, 0.0);
  }
  logger().warn("no yes/no answer after {} re-asks (last reply '{}'); treating as no", config_.max_reasks,
                first_line(reply));
  return false;
}

std::vector<PlanSlot> RemoteProvider::ask_plan(const std::string& prompt, TimeOfDay end) const {
  return parse_plan_reply(chat(prompt, config_.generation_temperature), end);
}

bool RemoteProvider::classify_need_satisfaction(const CallSite&, std::string_view activity, Need need) const {
  if (text::trim(activity).empty()) return false;
  return ask_yes_no(prompts_.render(
      "classify_need", {{"activity", std::string(activity)}, {"satisfaction-action", std::string(satisfaction_action(need))}}));
}

Emotion RemoteProvider::classify_emotion(const CallSite&, std::string_view activity) const {
  const auto prompt = prompts_.render("classify_emotion", {{"activity", std::string(activity)}});
  std::string reply = chat(prompt, 0.0);
  for (int i = 0;; ++i) {
    if (auto e = parse_emotion_reply(reply)) return *e;
    if (i >= config_.max_reasks) break;
    reply = chat(prompt + " " + kReask, 0.0);
  }
  logger().warn("unrecognised emotion reply '{}'; using neutral", first_line(reply));
  return Emotion::Neutral;
}

bool RemoteProvider::judge_enjoyment(const CallSite&, std::string_view transcript, std::string_view name) const {
  return ask_yes_no(
      prompts_.render("judge_enjoyment", {{"conversation", std::string(transcript)}, {"name", std::string(name)}}));
}

bool RemoteProvider::classify_sentiment(const CallSite&, std::string_view utterance) const {
  return ask_yes_no(prompts_.render("classify_sentiment", {{"utterance", std::string(utterance)}}));
}

std::vector<PlanSlot> RemoteProvider::generate_day_outline(const CallSite&, const PlanningRequest& req) const {
  return ask_plan(prompts_.render("day_outline", planning_vars(req)), req.frame.end);
}

std::vector<PlanSlot> RemoteProvider::refine_to_hourly(const CallSite&, const PlanningRequest& req,
                                                       std::span<const PlanSlot> outline) const {
  auto vars = planning_vars(req);
  vars["outline"] = plan_lines(outline);
  return ask_plan(prompts_.render("hourly_plan", vars), req.frame.end);
}

std::vector<PlanSlot> RemoteProvider::refine_to_quarter_hour(const CallSite&, const PlanningRequest& req,
                                                             std::span<const PlanSlot>,
                                                             std::span<const PlanSlot> hourly) const {
  auto vars = planning_vars(req);
  vars["hourly"] = plan_lines(hourly);
  return ask_plan(prompts_.render("quarter_hour_plan", vars), req.frame.end);
}

std::optional<std::string> RemoteProvider::propose_plan_change(const CallSite&, const ReplanRequest& req) const {
  const auto remaining = req.remaining();
  const auto reply = chat(prompts_.render("plan_change", {{"now", req.now.str()},
                                                          {"internal_state", req.internal_state},
                                                          {"name", req.name},
                                                          {"remaining_plan", plan_lines(remaining)}}),
                          config_.generation_temperature);
  const auto line = strip_quotes(first_line(reply));
  const auto lower = text::to_lower(line);
  if (line.empty() || text::first_word(line) == "no" || lower.rfind("no change", 0) == 0) return std::nullopt;
  return line;
}

std::vector<PlanSlot> RemoteProvider::regenerate_remaining_plan(const CallSite&, const ReplanRequest& req,
                                                                std::string_view change) const {
  const auto remaining = req.remaining();
  if (remaining.empty()) return {};
  return ask_plan(prompts_.render("regenerate_plan", {{"now", req.now.str()},
                                                      {"internal_state", req.internal_state},
                                                      {"name", req.name},
                                                      {"remaining_plan", plan_lines(remaining)},
                                                      {"change", std::string(change)}}),
                  remaining.back().end);
}

std::string RemoteProvider::choose_location(const CallSite&, const LocationRequest& req) const {
  std::string listing;
  for (std::size_t i = 0; i < req.locations.size(); ++i) {
    listing += "- " + req.locations[i];
    if (i < req.descriptions.size() && !req.descriptions[i].empty()) listing += ": " + req.descriptions[i];
    listing += "\n";
  }
  const auto reply = strip_quotes(first_line(chat(prompts_.render("choose_location", {{"name", req.agent},
                                                                                      {"activity", req.activity},
                                                                                      {"previous_location", req.previous_location},
                                                                                      {"locations", listing}}),
                                                  0.0)));
  const auto lower = text::to_lower(reply);
  const std::string* best = nullptr;
  for (const auto& loc : req.locations) {
    const auto l = text::to_lower(loc);
    if (l == lower) return loc;
    if (lower.find(l) != std::string::npos && (!best || loc.size() > best->size())) best = &loc;
  }
  return best ? *best : reply;
}

std::optional<std::string> RemoteProvider::decide_dialogue(const CallSite&, const DialogueContext& ctx) const {
  const auto reply = first_line(chat(prompts_.render("decide_dialogue", dialogue_vars(ctx)), config_.generation_temperature));
  if (reply.empty() || text::first_word(reply) == "no") return std::nullopt;
  std::string topic = reply;
  if (text::first_word(topic) == "yes") {
    topic = topic.substr(std::min(topic.size(), std::size_t{3}));
    topic.erase(0, topic.find_first_not_of(" ,.:;-"));
  }
  topic = strip_quotes(topic);
  if (topic.empty()) return std::nullopt;
  return topic;
}

std::optional<std::string> RemoteProvider::next_utterance(const CallSite&, const DialogueContext& ctx,
                                                          std::span<const Turn> history) const {
  const auto recent = history.size() > config_.history_turns ? history.last(config_.history_turns) : history;
  std::string lines;
  for (const auto& t : recent) lines += t.speaker + ": " + t.text + "\n";
  if (lines.empty()) lines = "(nothing yet)\n";
  auto vars = dialogue_vars(ctx);
  vars["history"] = lines;

  std::string reply = text::trim(chat(prompts_.render("next_utterance", vars), config_.generation_temperature));
  if (reply.empty() || reply.find("[END]") != std::string::npos) return std::nullopt;
  const std::string prefix = ctx.self.name + ":";
  if (reply.rfind(prefix, 0) == 0) reply = text::trim(reply.substr(prefix.size()));
  reply = text::trim(reply.substr(0, reply.find("\n\n")));
  if (reply.size() >= 2 && reply.front() == '"' && reply.back() == '"') reply = reply.substr(1, reply.size() - 2);
  if (reply.empty()) return std::nullopt;
  return reply;
}

}  // namespace humanoid
