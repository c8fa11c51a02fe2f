#include "humanoid/timeline.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "humanoid/text.hpp"

namespace humanoid {

using nlohmann::ordered_json;

std::size_t Timeline::activity_record_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.agents.size();
  return n;
}

namespace {

ordered_json needs_json(const BasicNeeds& n) {
  ordered_json j = ordered_json::object();
  for (Need need : kAllNeeds) j[std::string(to_string(need))] = n.get(need);
  return j;
}

BasicNeeds needs_from(const ordered_json& j) {
  BasicNeeds n;
  for (Need need : kAllNeeds) n.set(need, j.at(std::string(to_string(need))).get<int>());
  return n;
}

ordered_json header_json(const TimelineHeader& h) {
  ordered_json j;
  j["schema_version"] = h.schema_version;
  j["world_name"] = h.world_name;
  j["seed"] = h.seed;
  j["provider"] = {{"name", h.provider.name}, {"version", h.provider.version}};
  j["num_days"] = h.num_days;
  j["decay_mode"] = std::string(to_string(h.decay_mode));
  j["agents"] = h.agents;
  j["day_start"] = h.day_start.str();
  j["day_end"] = h.day_end.str();
  j["step_minutes"] = h.step_minutes;
  return j;
}

TimelineHeader header_from(const ordered_json& j) {
  TimelineHeader h;
  h.schema_version = j.at("schema_version").get<int>();
  if (h.schema_version > kTimelineSchemaVersion || h.schema_version < 1) {
    throw TimelineFormatError("unsupported timeline schema_version " + std::to_string(h.schema_version) +
                              " (this build reads version " + std::to_string(kTimelineSchemaVersion) + ")");
  }
  h.world_name = j.at("world_name").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.provider = {j.at("provider").at("name").get<std::string>(),
                j.at("provider").at("version").get<std::string>()};
  h.num_days = j.at("num_days").get<int>();
  h.decay_mode = parse_decay_mode(j.at("decay_mode").get<std::string>());
  h.agents = j.at("agents").get<std::vector<std::string>>();
  h.day_start = TimeOfDay::parse(j.at("day_start").get<std::string>());
  h.day_end = TimeOfDay::parse(j.at("day_end").get<std::string>());
  h.step_minutes = j.at("step_minutes").get<int>();
  return h;
}

ordered_json agent_json(const AgentStepRecord& a) {
  ordered_json j;
  j["name"] = a.name;
  j["activity"] = a.activity;
  j["planned_activity"] = a.planned_activity;
  j["location"] = a.location;
  j["emotion"] = std::string(to_string(a.emotion));
  j["activity_emotion"] = std::string(to_string(a.activity_emotion));
  j["needs"] = needs_json(a.needs);
  ordered_json sat = ordered_json::array();
  for (Need n : a.satisfied) sat.push_back(std::string(to_string(n)));
  j["satisfied"] = sat;
  j["replanned"] = a.replanned;
  return j;
}

AgentStepRecord agent_from(const ordered_json& j) {
  AgentStepRecord a;
  a.name = j.at("name").get<std::string>();
  a.activity = j.at("activity").get<std::string>();
  a.planned_activity = j.at("planned_activity").get<std::string>();
  a.location = j.at("location").get<std::string>();
  a.emotion = parse_emotion(j.at("emotion").get<std::string>());
  a.activity_emotion = parse_emotion(j.at("activity_emotion").get<std::string>());
  a.needs = needs_from(j.at("needs"));
  for (const auto& s : j.at("satisfied")) a.satisfied.push_back(parse_need(s.get<std::string>()));
  a.replanned = j.at("replanned").get<bool>();
  return a;
}

ordered_json record_json(const StepRecord& r) {
  ordered_json j;
  j["day"] = r.day;
  j["step"] = r.step;
  j["time"] = r.time.str();
  ordered_json agents = ordered_json::array();
  for (const auto& a : r.agents) agents.push_back(agent_json(a));
  j["agents"] = agents;
  ordered_json rels = ordered_json::array();
  for (const auto& e : r.relationships) {
    rels.push_back(ordered_json{{"from", e.from}, {"to", e.to}, {"closeness", e.closeness}});
  }
  j["relationships"] = rels;
  return j;
}

StepRecord record_from(const ordered_json& j) {
  StepRecord r;
  r.day = j.at("day").get<int>();
  r.step = j.at("step").get<int>();
  r.time = TimeOfDay::parse(j.at("time").get<std::string>());
  for (const auto& a : j.at("agents")) r.agents.push_back(agent_from(a));
  for (const auto& e : j.at("relationships")) {
    r.relationships.push_back(
        {e.at("from").get<std::string>(), e.at("to").get<std::string>(), e.at("closeness").get<int>()});
  }
  return r;
}

ordered_json optional_bool(const std::optional<bool>& b) { return b ? ordered_json(*b) : ordered_json(nullptr); }

std::optional<bool> optional_bool_from(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<bool>();
}

ordered_json conversation_json(const ConversationRecord& c) {
  const auto& conv = c.conversation;
  ordered_json j;
  j["day"] = conv.day;
  j["step"] = conv.step_started;
  j["participants"] = {conv.participants[0], conv.participants[1]};
  j["topic"] = conv.topic;
  ordered_json turns = ordered_json::array();
  for (const auto& t : conv.turns) {
    ordered_json tj{{"speaker", t.speaker}, {"text", t.text}};
    if (t.positive) tj["sentiment"] = *t.positive ? "positive" : "negative";
    turns.push_back(tj);
  }
  j["turns"] = turns;
  j["enjoyment"] = {optional_bool(conv.enjoyed[0]), optional_bool(conv.enjoyed[1])};
  j["closeness_delta"] = {c.closeness_delta[0], c.closeness_delta[1]};
  return j;
}

ConversationRecord conversation_from(const ordered_json& j) {
  ConversationRecord c;
  auto& conv = c.conversation;
  conv.day = j.at("day").get<int>();
  conv.step_started = j.at("step").get<int>();
  conv.participants = {j.at("participants").at(0).get<std::string>(),
                       j.at("participants").at(1).get<std::string>()};
  conv.topic = j.at("topic").get<std::string>();
  for (const auto& t : j.at("turns")) {
    Turn turn{t.at("speaker").get<std::string>(), t.at("text").get<std::string>(), std::nullopt};
    if (t.contains("sentiment")) {
      const auto s = t.at("sentiment").get<std::string>();
      if (s != "positive" && s != "negative") throw TimelineFormatError("invalid sentiment '" + s + "'");
      turn.positive = s == "positive";
    }
    conv.turns.push_back(std::move(turn));
  }
  conv.enjoyed = {optional_bool_from(j.at("enjoyment").at(0)), optional_bool_from(j.at("enjoyment").at(1))};
  c.closeness_delta = {j.at("closeness_delta").at(0).get<int>(), j.at("closeness_delta").at(1).get<int>()};
  return c;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string timeline_to_json(const Timeline& t) {
  ordered_json j;
  j["header"] = header_json(t.header);
  j["status"] = t.aborted ? "aborted" : "complete";
  if (t.aborted) j["abort_reason"] = *t.aborted;
  ordered_json records = ordered_json::array();
  for (const auto& r : t.records) records.push_back(record_json(r));
  j["records"] = records;
  ordered_json convs = ordered_json::array();
  for (const auto& c : t.conversations) convs.push_back(conversation_json(c));
  j["conversations"] = convs;
  return j.dump(2) + "\n";
}

Timeline timeline_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw TimelineFormatError(std::string("timeline is not valid JSON: ") + e.what());
  }
  try {
    Timeline t;
    t.header = header_from(j.at("header"));
    if (j.value("status", "complete") == "aborted") t.aborted = j.value("abort_reason", "");
    for (const auto& r : j.at("records")) t.records.push_back(record_from(r));
    for (const auto& c : j.at("conversations")) t.conversations.push_back(conversation_from(c));
    return t;
  } catch (const TimelineFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw TimelineFormatError(std::string("malformed timeline: ") + e.what());
  }
}

void write_timeline(const Timeline& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << timeline_to_json(t);
  if (!out) throw std::ios_base::failure("error writing " + path.string());
}

Timeline read_timeline(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return timeline_from_json(ss.str());
}

void write_timeline_csv(const Timeline& t, std::ostream& out) {
  out << "day,step,time,agent,activity,planned_activity,location,emotion,activity_emotion";
  for (Need n : kAllNeeds) out << ',' << to_string(n);
  out << ",satisfied,replanned\n";
  for (const auto& r : t.records) {
    for (const auto& a : r.agents) {
      std::vector<std::string> sat;
      for (Need n : a.satisfied) sat.emplace_back(to_string(n));
      out << r.day << ',' << r.step << ',' << r.time.str() << ',' << csv_field(a.name) << ','
          << csv_field(a.activity) << ',' << csv_field(a.planned_activity) << ',' << csv_field(a.location)
          << ',' << to_string(a.emotion) << ',' << to_string(a.activity_emotion);
      for (Need n : kAllNeeds) out << ',' << a.needs.get(n);
      out << ',' << text::join(sat, ";") << ',' << (a.replanned ? "true" : "false") << '\n';
    }
  }
}

}  // namespace humanoid
