#include "humanoid/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "humanoid/kernel.hpp"

namespace humanoid {

namespace {

RunOptions run_options(const ExperimentOptions& o) {
  RunOptions r;
  r.seed = o.seed;
  r.num_days = o.num_days;
  r.log_provider_calls = false;
  return r;
}

std::map<std::string, int> count_steps(const Timeline& t, auto&& predicate) {
  std::map<std::string, int> out;
  for (const auto& name : t.header.agents) out[name] = 0;
  for (const auto& r : t.records) {
    for (const auto& a : r.agents) {
      if (predicate(a)) ++out[a.name];
    }
  }
  return out;
}

std::string fixed(double v, int decimals) { return fmt::format("{:.{}f}", v, decimals); }

struct Column {
  std::string world;
  std::string agent;
};

template <typename Result>
std::vector<Column> agent_columns(const std::vector<Result>& results) {
  std::vector<Column> cols;
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      const bool seen = std::any_of(cols.begin(), cols.end(), [&](const Column& c) {
        return c.world == r.world && c.agent == row.agent;
      });
      if (!seen) cols.push_back({r.world, row.agent});
    }
  }
  return cols;
}

std::vector<std::string> header_for(const std::string& first, const std::vector<Column>& cols) {
  std::vector<std::string> h{first};
  for (const auto& c : cols) h.push_back(initials(c.agent));
  h.emplace_back("mean");
  return h;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

NeedsResult needs_experiment(const WorldConfig& world, Need need, const CognitionProvider& provider,
                             const ExperimentOptions& options) {
  WorldConfig baseline = world;
  for (auto& a : baseline.agents) a.initial_needs = BasicNeeds{};
  WorldConfig treatment = baseline;
  for (auto& a : treatment.agents) a.initial_needs.set(need, 0);

  auto satisfies = [need](const AgentStepRecord& a) {
    return std::find(a.satisfied.begin(), a.satisfied.end(), need) != a.satisfied.end();
  };
  const auto base_t = Simulation(baseline, provider, run_options(options)).run();
  const auto treat_t = Simulation(treatment, provider, run_options(options)).run();
  const auto base = count_steps(base_t, satisfies);
  const auto treat = count_steps(treat_t, satisfies);

  NeedsResult result{world.world_name, need, {}};
  for (const auto& [name, steps] : base) {
    NeedsRow row{name, steps * world.step_minutes, treat.at(name) * world.step_minutes, std::nullopt};
    if (row.baseline_minutes > 0) {
      row.change_percent = 100.0 * (row.treatment_minutes - row.baseline_minutes) / row.baseline_minutes;
    }
    result.rows.push_back(row);
  }
  return result;
}

EmotionResult emotion_experiment(const WorldConfig& world, Emotion emotion, const CognitionProvider& provider,
                                 const ExperimentOptions& options) {
  if (emotion == Emotion::Neutral) throw std::invalid_argument("emotion experiment needs a non-neutral emotion");
  auto expresses = [emotion](const AgentStepRecord& a) { return a.activity_emotion == emotion; };

  WorldConfig neutral = world;
  for (auto& a : neutral.agents) a.initial_emotion = Emotion::Neutral;
  const auto base_t = Simulation(neutral, provider, run_options(options)).run();
  RunOptions pinned = run_options(options);
  pinned.pinned_emotion = emotion;
  Simulation treatment(world, provider, pinned);
  const auto treat_t = treatment.run();

  const auto base = count_steps(base_t, expresses);
  const auto treat = count_steps(treat_t, expresses);
  EmotionResult result{world.world_name, emotion, {}, 0};
  for (const auto& [name, count] : base) {
    result.rows.push_back({name, count, treat.at(name), treat.at(name) - count});
  }
  result.pinned_emotion_writes = static_cast<int>(std::count_if(
      treatment.events().begin(), treatment.events().end(),
      [](const Event& e) { return e.kind == EventKind::EmotionChanged; }));
  return result;
}

ClosenessResult closeness_experiment(const WorldConfig& world, int level, const CognitionProvider& provider,
                                     const ExperimentOptions& options) {
  if (std::find(std::begin(kClosenessLevels), std::end(kClosenessLevels), level) == std::end(kClosenessLevels)) {
    throw std::invalid_argument("closeness level must be one of 0, 5, 10, 15");
  }
  WorldConfig config = world;
  config.set_all_closeness(level);
  RunOptions ro = run_options(options);
  ro.annotate_sentiment = true;
  const auto t = Simulation(config, provider, ro).run();

  ClosenessResult r{world.world_name, level, 0, 0.0, 0.0, 0, 0, false};
  for (const auto& c : t.conversations) {
    if (r.conversations == kConversationsMeasured) break;
    ++r.conversations;
    for (const auto& turn : c.conversation.turns) {
      ++r.total_turns;
      if (turn.positive.value_or(false)) ++r.positive_turns;
    }
  }
  r.flagged = r.conversations < kConversationsMeasured;
  if (r.conversations > 0) r.mean_turns = static_cast<double>(r.total_turns) / r.conversations;
  if (r.total_turns > 0) r.percent_positive = 100.0 * r.positive_turns / r.total_turns;
  return r;
}

std::string initials(const std::string& name) {
  std::string out;
  bool start = true;
  for (char c : name) {
    if (c == ' ') {
      start = true;
    } else if (start) {
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      start = false;
    }
  }
  return out;
}

ResultTable needs_table(const std::vector<NeedsResult>& results) {
  const auto cols = agent_columns(results);
  ResultTable t{"% change in time spent satisfying basic need", header_for("need", cols), {}, {}};
  for (Need need : {Need::Health, Need::Fullness, Need::Fun, Need::Social, Need::Energy}) {
    std::vector<std::string> row{std::string(to_string(need))};
    bool any = false;
    double sum = 0.0;
    int defined = 0;
    for (const auto& c : cols) {
      std::string cell = "-";
      for (const auto& r : results) {
        if (r.need != need || r.world != c.world) continue;
        for (const auto& nr : r.rows) {
          if (nr.agent != c.agent) continue;
          any = true;
          if (nr.change_percent) {
            cell = fixed(*nr.change_percent, 1);
            sum += *nr.change_percent;
            ++defined;
          } else {
            cell = "undefined";
          }
        }
      }
      row.push_back(cell);
    }
    if (!any) continue;
    row.push_back(defined ? fixed(sum / defined, 1) : "undefined");
    t.rows.push_back(std::move(row));
  }
  for (const auto& c : cols) t.notes.push_back(initials(c.agent) + ": " + c.agent + " (" + c.world + ")");
  return t;
}

ResultTable emotion_table(const std::vector<EmotionResult>& results) {
  const auto cols = agent_columns(results);
  ResultTable t{"change in no. of activities expressing emotion", header_for("emotion", cols), {}, {}};
  for (Emotion e : {Emotion::Angry, Emotion::Sad, Emotion::Afraid, Emotion::Disgusted, Emotion::Surprised,
                    Emotion::Happy}) {
    std::vector<std::string> row{std::string(to_string(e))};
    bool any = false;
    double sum = 0.0;
    int n = 0;
    for (const auto& c : cols) {
      std::string cell = "-";
      for (const auto& r : results) {
        if (r.emotion != e || r.world != c.world) continue;
        for (const auto& er : r.rows) {
          if (er.agent != c.agent) continue;
          any = true;
          cell = std::to_string(er.delta);
          sum += er.delta;
          ++n;
        }
      }
      row.push_back(cell);
    }
    if (!any) continue;
    row.push_back(fixed(sum / n, 1));
    t.rows.push_back(std::move(row));
  }
  for (const auto& c : cols) t.notes.push_back(initials(c.agent) + ": " + c.agent + " (" + c.world + ")");
  return t;
}

ResultTable closeness_table(const std::vector<ClosenessResult>& results) {
  std::vector<std::string> worlds;
  for (const auto& r : results) {
    if (std::find(worlds.begin(), worlds.end(), r.world) == worlds.end()) worlds.push_back(r.world);
  }
  ResultTable t{"effect of closeness on conversations (first " + std::to_string(kConversationsMeasured) +
                    " per run)",
                {"closeness"},
                {},
                {}};
  for (const auto& w : worlds) t.header.push_back("mean turns " + initials(w));
  for (const auto& w : worlds) t.header.push_back("% positive " + initials(w));

  bool any_flag = false;
  for (int level : kClosenessLevels) {
    std::vector<std::string> turns;
    std::vector<std::string> positive;
    bool any = false;
    for (const auto& w : worlds) {
      auto it = std::find_if(results.begin(), results.end(),
                             [&](const ClosenessResult& r) { return r.world == w && r.level == level; });
      if (it == results.end()) {
        turns.emplace_back("-");
        positive.emplace_back("-");
        continue;
      }
      any = true;
      const std::string mark = it->flagged ? "*" : "";
      any_flag = any_flag || it->flagged;
      turns.push_back(it->conversations ? fixed(it->mean_turns, 2) + mark : "n/a" + mark);
      positive.push_back(it->total_turns ? fixed(it->percent_positive, 1) + mark : "n/a" + mark);
    }
    if (!any) continue;
    std::vector<std::string> row{std::string(to_string(closeness_label(level)))};
    row.insert(row.end(), turns.begin(), turns.end());
    row.insert(row.end(), positive.begin(), positive.end());
    t.rows.push_back(std::move(row));
  }
  for (const auto& w : worlds) t.notes.push_back(initials(w) + ": " + w);
  if (any_flag) {
    t.notes.push_back("* fewer than " + std::to_string(kConversationsMeasured) +
                      " conversations occurred; values cover those that did");
  }
  return t;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

std::string ResultTable::to_text() const {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) width[i] = std::max(width[i], cells[i].size());
  };
  measure(header);
  for (const auto& r : rows) measure(r);

  std::ostringstream out;
  if (!title.empty()) out << title << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) {
      if (i == 0) {
        out << fmt::format("{:<{}}", cells[i], width[i]);
      } else {
        out << "  " << fmt::format("{:>{}}", cells[i], width[i]);
      }
    }
    out << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
  for (const auto& r : rows) line(r);
  for (const auto& n : notes) out << n << '\n';
  return out.str();
}

}  // namespace humanoid
