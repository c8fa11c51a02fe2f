#include "humanoid/world.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "humanoid/log.hpp"
#include "humanoid/scripted_provider.hpp"

namespace humanoid {

std::string Diagnostic::str() const {
  std::string s = path.empty() ? std::string("<root>") : path;
  if (line > 0) s += " (line " + std::to_string(line) + ")";
  return s + ": " + message;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out = "invalid world configuration";
  for (const auto& d : ds) out += "\n  " + d.str();
  return out;
}

}  // namespace

WorldConfigError::WorldConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string WorldConfig::root_of(const std::string& location) const {
  std::string cur = location;
  for (std::size_t guard = 0; guard <= locations.size(); ++guard) {
    auto it = std::find_if(locations.begin(), locations.end(),
                           [&](const LocationConfig& l) { return l.name == cur; });
    if (it == locations.end() || !it->contained_in) return cur;
    cur = *it->contained_in;
  }
  return cur;
}

int WorldConfig::initial_closeness(const std::string& from, const std::string& to) const {
  int value = kDefaultCloseness;
  for (const auto& r : relationships) {
    if ((r.from == from && r.to == to) || (r.symmetric && r.from == to && r.to == from)) {
      value = r.closeness;
    }
  }
  return value;
}

void WorldConfig::set_all_closeness(int closeness) {
  relationships.clear();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      relationships.push_back({agents[i].profile.name, agents[j].profile.name, closeness, true});
    }
  }
}

namespace {

class Reader {
 public:
  explicit Reader(const LoadOptions& options) : options_(options) {}

  std::vector<Diagnostic> diagnostics;

  void error(const std::string& path, const YAML::Node& node, std::string message) {
    diagnostics.push_back({path, line_of(node), std::move(message)});
  }

  static int line_of(const YAML::Node& node) {
    if (!node.IsDefined()) return 0;
    const auto mark = node.Mark();
    return mark.line >= 0 ? mark.line + 1 : 0;
  }

  void check_keys(const std::string& path, const YAML::Node& map, const std::set<std::string>& allowed) {
    if (!map.IsMap()) return;
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (allowed.count(key)) continue;
      const std::string field = path.empty() ? key : path + "." + key;
      if (options_.strict) {
        diagnostics.push_back({field, line_of(kv.first), "unknown field"});
      } else {
        logger().warn("ignoring unknown world field {} (line {})", field, line_of(kv.first));
      }
    }
  }

  std::optional<std::string> str(const std::string& path, const YAML::Node& node, bool required) {
    if (!node.IsDefined() || node.IsNull()) {
      if (required) diagnostics.push_back({path, 0, "required field missing"});
      return std::nullopt;
    }
    if (!node.IsScalar()) {
      error(path, node, "expected a string");
      return std::nullopt;
    }
    return node.as<std::string>();
  }

  std::optional<long> integer(const std::string& path, const YAML::Node& node, bool required) {
    if (!node.IsDefined() || node.IsNull()) {
      if (required) diagnostics.push_back({path, 0, "required field missing"});
      return std::nullopt;
    }
    try {
      return node.as<long>();
    } catch (const YAML::Exception&) {
      error(path, node, "expected an integer");
      return std::nullopt;
    }
  }

  std::optional<double> number(const std::string& path, const YAML::Node& node) {
    if (!node.IsDefined() || node.IsNull()) return std::nullopt;
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      error(path, node, "expected a number");
      return std::nullopt;
    }
  }

  std::optional<bool> boolean(const std::string& path, const YAML::Node& node) {
    if (!node.IsDefined() || node.IsNull()) return std::nullopt;
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      error(path, node, "expected true or false");
      return std::nullopt;
    }
  }

  std::optional<int> bounded(const std::string& path, const YAML::Node& node, long lo, long hi,
                             bool required) {
    auto v = integer(path, node, required);
    if (!v) return std::nullopt;
    if (*v < lo || *v > hi) {
      error(path, node,
            "value " + std::to_string(*v) + " out of range [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
      return std::nullopt;
    }
    return static_cast<int>(*v);
  }

  std::optional<TimeOfDay> time(const std::string& path, const YAML::Node& node) {
    auto s = str(path, node, false);
    if (!s) return std::nullopt;
    auto t = TimeOfDay::try_parse(*s);
    if (!t) error(path, node, "invalid time '" + *s + "', expected HH:MM");
    return t;
  }

  std::vector<std::string> string_list(const std::string& path, const YAML::Node& node) {
    std::vector<std::string> out;
    if (!node.IsDefined() || node.IsNull()) return out;
    if (node.IsScalar()) {
      out.push_back(node.as<std::string>());
      return out;
    }
    if (!node.IsSequence()) {
      error(path, node, "expected a list of strings");
      return out;
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (auto s = str(path + "[" + std::to_string(i) + "]", node[i], true)) out.push_back(*s);
    }
    return out;
  }

 private:
  const LoadOptions& options_;
};

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

/// Cross-field checks shared by the loader and validate_world. `lines`
/// optionally maps a diagnostic path to its source line.
std::vector<Diagnostic> check_invariants(const WorldConfig& c,
                                         const std::map<std::string, int>& lines = {}) {
  std::vector<Diagnostic> out;
  auto add = [&](const std::string& path, std::string msg) {
    auto it = lines.find(path);
    out.push_back({path, it == lines.end() ? 0 : it->second, std::move(msg)});
  };

  if (c.world_name.empty()) add("world_name", "must not be empty");
  if (c.step_minutes <= 0 || 60 % c.step_minutes != 0) {
    add("step_minutes", "must be a positive divisor of 60");
  }
  if (c.day_start >= c.day_end) add("day_end", "must be later than day_start");
  if (c.day_start.minutes() % 60 != 0) add("day_start", "must be on the hour");
  if (c.day_end.minutes() % 60 != 0) add("day_end", "must be on the hour");
  if (c.step_minutes > 0 && 60 % c.step_minutes == 0) {
    const double window = 300.0 / c.step_minutes;
    for (Need n : kAllNeeds) {
      const double r = c.decay.rate(n);
      if (r < 0.0 || r > window) {
        add("decay." + std::string(to_string(n)),
            "rate must be within [0, " + std::to_string(static_cast<int>(window)) + "] per 5 hours");
      }
    }
  }

  std::set<std::string> loc_names;
  if (c.locations.empty()) add("locations", "at least one location is required");
  for (std::size_t i = 0; i < c.locations.size(); ++i) {
    const auto& l = c.locations[i];
    if (l.name.empty()) add(idx("locations", i) + ".name", "must not be empty");
    if (!loc_names.insert(l.name).second) add(idx("locations", i) + ".name", "duplicate location '" + l.name + "'");
  }
  for (std::size_t i = 0; i < c.locations.size(); ++i) {
    const auto& l = c.locations[i];
    if (!l.contained_in) continue;
    const auto path = idx("locations", i) + ".contained_in";
    if (!loc_names.count(*l.contained_in)) {
      add(path, "undeclared location '" + *l.contained_in + "'");
      continue;
    }
    // Walk parents; revisiting a name means the containment graph has a cycle.
    std::set<std::string> seen{l.name};
    std::optional<std::string> cur = l.contained_in;
    while (cur) {
      if (!seen.insert(*cur).second) {
        add(path, "containment cycle through '" + *cur + "'");
        break;
      }
      auto it = std::find_if(c.locations.begin(), c.locations.end(),
                             [&](const LocationConfig& x) { return x.name == *cur; });
      cur = it == c.locations.end() ? std::nullopt : it->contained_in;
    }
  }

  std::set<std::string> agent_names;
  if (c.agents.empty()) add("agents", "at least one agent is required");
  for (std::size_t i = 0; i < c.agents.size(); ++i) {
    const auto& a = c.agents[i];
    const auto base = idx("agents", i);
    if (a.profile.name.empty()) add(base + ".name", "must not be empty");
    else if (!agent_names.insert(a.profile.name).second) add(base + ".name", "duplicate agent '" + a.profile.name + "'");
    if (a.profile.age < 0 || a.profile.age > 150) add(base + ".age", "out of range [0, 150]");
    for (Need n : kAllNeeds) {
      const int v = a.initial_needs.get(n);
      if (v < kNeedMin || v > kNeedMax) {
        add(base + ".initial_needs." + std::string(to_string(n)), "value out of range [0, 10]");
      }
    }
    if (a.initial_location && !loc_names.count(*a.initial_location)) {
      add(base + ".initial_location", "undeclared location '" + *a.initial_location + "'");
    }
  }

  std::set<std::pair<std::string, std::string>> directions;
  for (std::size_t i = 0; i < c.relationships.size(); ++i) {
    const auto& r = c.relationships[i];
    const auto base = idx("relationships", i);
    if (!agent_names.count(r.from)) add(base + ".from", "undeclared agent '" + r.from + "'");
    if (!agent_names.count(r.to)) add(base + ".to", "undeclared agent '" + r.to + "'");
    if (r.from == r.to) add(base + ".to", "an agent cannot have a relationship with itself");
    if (r.closeness < kClosenessMin || r.closeness > kClosenessMax) {
      add(base + ".closeness", "value " + std::to_string(r.closeness) + " out of range [0, 30]");
    }
    std::vector<std::pair<std::string, std::string>> dirs{{r.from, r.to}};
    if (r.symmetric && r.from != r.to) dirs.emplace_back(r.to, r.from);
    for (const auto& d : dirs) {
      if (!directions.insert(d).second) {
        add(base, "closeness " + d.first + " -> " + d.second + " is seeded more than once");
      }
    }
  }
  return out;
}

}  // namespace

void validate_world(const WorldConfig& config) {
  auto ds = check_invariants(config);
  if (!ds.empty()) throw WorldConfigError(std::move(ds));
}

WorldConfig parse_world(const std::string& yaml_text, const LoadOptions& options) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw WorldConfigError({{"", e.mark.line + 1, "YAML syntax error: " + e.msg}});
  }
  if (!root.IsMap()) throw WorldConfigError({{"", 1, "world file must be a mapping"}});

  Reader rd(options);
  WorldConfig c;
  std::map<std::string, int> lines;  // path -> line for cross-field diagnostics
  auto note = [&](const std::string& path, const YAML::Node& n) { lines[path] = Reader::line_of(n); };

  rd.check_keys("", root,
                {"world_name", "description", "step_minutes", "day_start", "day_end",
                 "reset_emotion_daily", "decay", "locations", "agents", "relationships"});

  if (auto s = rd.str("world_name", root["world_name"], true)) c.world_name = *s;
  note("world_name", root["world_name"]);
  if (auto s = rd.str("description", root["description"], false)) c.description = *s;
  if (auto v = rd.integer("step_minutes", root["step_minutes"], false)) c.step_minutes = static_cast<int>(*v);
  note("step_minutes", root["step_minutes"]);
  if (auto t = rd.time("day_start", root["day_start"])) c.day_start = *t;
  note("day_start", root["day_start"]);
  if (auto t = rd.time("day_end", root["day_end"])) c.day_end = *t;
  note("day_end", root["day_end"]);
  if (auto b = rd.boolean("reset_emotion_daily", root["reset_emotion_daily"])) c.reset_emotion_daily = *b;

  if (const auto decay = root["decay"]; decay.IsDefined() && !decay.IsNull()) {
    if (!decay.IsMap()) {
      rd.error("decay", decay, "expected a mapping");
    } else {
      rd.check_keys("decay", decay, {"mode", "fullness", "fun", "health", "social", "energy"});
      if (auto m = rd.str("decay.mode", decay["mode"], false)) {
        try {
          c.decay.mode = parse_decay_mode(*m);
        } catch (const DomainError& e) {
          rd.error("decay.mode", decay["mode"], e.what());
        }
      }
      for (Need n : kAllNeeds) {
        const std::string key(to_string(n));
        if (auto r = rd.number("decay." + key, decay[key])) c.decay.set_rate(n, *r);
        note("decay." + key, decay[key]);
      }
    }
  }
  c.decay.step_minutes = c.step_minutes;

  if (const auto locs = root["locations"]; locs.IsDefined()) {
    if (!locs.IsSequence()) {
      rd.error("locations", locs, "expected a list");
    } else {
      for (std::size_t i = 0; i < locs.size(); ++i) {
        const auto base = idx("locations", i);
        const auto& n = locs[i];
        note(base + ".name", n["name"]);
        note(base + ".contained_in", n["contained_in"]);
        if (!n.IsMap()) {
          rd.error(base, n, "expected a mapping");
          continue;
        }
        rd.check_keys(base, n, {"name", "description", "contained_in"});
        LocationConfig l;
        if (auto s = rd.str(base + ".name", n["name"], true)) l.name = *s;
        if (auto s = rd.str(base + ".description", n["description"], false)) l.description = *s;
        l.contained_in = rd.str(base + ".contained_in", n["contained_in"], false);
        c.locations.push_back(std::move(l));
      }
    }
  }
  note("locations", root["locations"]);

  if (const auto agents = root["agents"]; agents.IsDefined()) {
    if (!agents.IsSequence()) {
      rd.error("agents", agents, "expected a list");
    } else {
      for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto base = idx("agents", i);
        const auto& n = agents[i];
        if (!n.IsMap()) {
          rd.error(base, n, "expected a mapping");
          continue;
        }
        rd.check_keys(base, n,
                      {"name", "age", "traits", "description", "example_day_plan", "initial_emotion",
                       "initial_needs", "life_outlook", "initial_location"});
        note(base + ".name", n["name"]);
        note(base + ".age", n["age"]);
        note(base + ".initial_location", n["initial_location"]);
        AgentConfig a;
        if (auto s = rd.str(base + ".name", n["name"], true)) a.profile.name = *s;
        if (auto v = rd.integer(base + ".age", n["age"], false)) a.profile.age = static_cast<int>(*v);
        a.profile.traits = rd.string_list(base + ".traits", n["traits"]);
        a.profile.description = rd.string_list(base + ".description", n["description"]);
        if (auto s = rd.str(base + ".example_day_plan", n["example_day_plan"], false)) a.profile.example_day_plan = *s;
        if (auto s = rd.str(base + ".life_outlook", n["life_outlook"], false)) a.profile.life_outlook = *s;
        if (auto s = rd.str(base + ".initial_emotion", n["initial_emotion"], false)) {
          if (auto e = try_parse_emotion(*s)) {
            a.initial_emotion = *e;
          } else {
            rd.error(base + ".initial_emotion", n["initial_emotion"], "unknown emotion '" + *s + "'");
          }
        }
        if (const auto needs = n["initial_needs"]; needs.IsDefined() && !needs.IsNull()) {
          if (!needs.IsMap()) {
            rd.error(base + ".initial_needs", needs, "expected a mapping");
          } else {
            rd.check_keys(base + ".initial_needs", needs, {"fullness", "fun", "health", "social", "energy"});
            for (Need need : kAllNeeds) {
              const std::string key(to_string(need));
              if (auto v = rd.bounded(base + ".initial_needs." + key, needs[key], kNeedMin, kNeedMax, false)) {
                a.initial_needs.set(need, *v);
              }
            }
          }
        }
        a.initial_location = rd.str(base + ".initial_location", n["initial_location"], false);
        c.agents.push_back(std::move(a));
      }
    }
  }
  note("agents", root["agents"]);

  if (const auto rels = root["relationships"]; rels.IsDefined() && !rels.IsNull()) {
    if (!rels.IsSequence()) {
      rd.error("relationships", rels, "expected a list");
    } else {
      for (std::size_t i = 0; i < rels.size(); ++i) {
        const auto base = idx("relationships", i);
        const auto& n = rels[i];
        if (!n.IsMap()) {
          rd.error(base, n, "expected a mapping");
          continue;
        }
        rd.check_keys(base, n, {"from", "to", "closeness", "symmetric"});
        note(base, n);
        note(base + ".from", n["from"]);
        note(base + ".to", n["to"]);
        RelationshipConfig r;
        if (auto s = rd.str(base + ".from", n["from"], true)) r.from = *s;
        if (auto s = rd.str(base + ".to", n["to"], true)) r.to = *s;
        if (auto v = rd.bounded(base + ".closeness", n["closeness"], kClosenessMin, kClosenessMax, true)) {
          r.closeness = *v;
        } else {
          continue;
        }
        if (auto b = rd.boolean(base + ".symmetric", n["symmetric"])) r.symmetric = *b;
        c.relationships.push_back(std::move(r));
      }
    }
  }

  auto diagnostics = std::move(rd.diagnostics);
  if (diagnostics.empty()) {
    diagnostics = check_invariants(c, lines);
  }
  if (!diagnostics.empty()) throw WorldConfigError(std::move(diagnostics));
  return c;
}

WorldConfig load_world(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw WorldConfigError({{path.string(), 0, "cannot open world file"}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_world(ss.str(), options);
}

std::vector<std::filesystem::path> bundled_world_paths() {
  const auto dir = default_data_root() / "worlds";
  return {dir / "lins_family.yaml", dir / "friends.yaml", dir / "big_bang_theory.yaml"};
}

}  // namespace humanoid
