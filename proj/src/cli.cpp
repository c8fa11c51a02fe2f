#include "humanoid/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "humanoid/agreement.hpp"
#include "humanoid/events.hpp"
#include "humanoid/experiments.hpp"
#include "humanoid/kernel.hpp"
#include "humanoid/log.hpp"
#include "humanoid/prompts.hpp"
#include "humanoid/remote_provider.hpp"
#include "humanoid/scripted_provider.hpp"
#include "humanoid/text.hpp"
#include "humanoid/timeline.hpp"
#include "humanoid/world.hpp"

namespace humanoid {

namespace fs = std::filesystem;

namespace {

/// Bad rule tables, prompt files or metric inputs; maps to the config exit code.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProviderOptions {
  std::string kind = "scripted";
  std::string rules;
  std::string prompts;
  std::string model;
  std::string base_url;
  std::optional<double> temperature;
  int max_in_flight = 4;
};

struct WorldOptions {
  std::vector<std::string> worlds;
  std::string decay_mode;
  bool lenient = false;
};

void add_provider_options(CLI::App* cmd, ProviderOptions& o) {
  cmd->add_option("--provider", o.kind, "Cognition provider")
      ->check(CLI::IsMember({"scripted", "llm"}))
      ->capture_default_str();
  cmd->add_option("--rules", o.rules, "Scripted rule tables (JSON); defaults to the bundled file");
  cmd->add_option("--prompts", o.prompts, "Prompt template directory for the llm provider");
  cmd->add_option("--model", o.model, "Chat model name for the llm provider");
  cmd->add_option("--base-url", o.base_url, "Chat completion endpoint base URL");
  cmd->add_option("--temperature", o.temperature, "Sampling temperature for generation calls")
      ->check(CLI::Range(0.0, 2.0));
  cmd->add_option("--max-in-flight", o.max_in_flight, "Concurrent requests to the chat endpoint")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_decay_options(CLI::App* cmd, WorldOptions& o) {
  cmd->add_option("--decay-mode", o.decay_mode, "Override the world's decay mode")
      ->check(CLI::IsMember({"stochastic", "deterministic"}));
  cmd->add_flag("--lenient", o.lenient, "Warn instead of failing on unknown world fields");
}

std::unique_ptr<CognitionProvider> make_provider(const ProviderOptions& o, std::uint64_t seed) {
  if (o.kind == "scripted") {
    ScriptedRules rules;
    try {
      rules = ScriptedRules::load(o.rules.empty() ? default_rules_path() : fs::path(o.rules));
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    return std::make_unique<ScriptedProvider>(std::move(rules), seed);
  }
  PromptLibrary prompts;
  try {
    prompts = PromptLibrary::load(o.prompts.empty() ? PromptLibrary::default_dir() : fs::path(o.prompts));
  } catch (const PromptError& e) {
    throw InputError(e.what());
  }
  RemoteConfig config;
  if (!o.model.empty()) config.model = o.model;
  if (!o.base_url.empty()) config.base_url = o.base_url;
  if (o.temperature) config.generation_temperature = *o.temperature;
  config.max_in_flight = o.max_in_flight;
  return RemoteProvider::from_environment(std::move(config), std::move(prompts));
}

WorldConfig load(const std::string& path, const WorldOptions& o) {
  auto config = load_world(path, LoadOptions{!o.lenient});
  if (!o.decay_mode.empty()) config.decay.mode = parse_decay_mode(o.decay_mode);
  return config;
}

std::vector<std::string> world_paths(const WorldOptions& o) {
  if (!o.worlds.empty()) return o.worlds;
  std::vector<std::string> out;
  for (const auto& p : bundled_world_paths()) out.push_back(p.string());
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write " + path.string());
  f << content;
  if (!f) throw std::ios_base::failure("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Shortest round-trip form, always with a decimal point ("1.0", not "1").
std::string number(double v) {
  auto s = fmt::format("{}", v);
  if (s.find_first_of(".einf") == std::string::npos) s += ".0";
  return s;
}

/// Comma-separated rows, skipping blank lines and lines starting with '#'.
std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = t.find(',', start);
      row.push_back(text::trim(t.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path.string() + ": no data rows");
  return rows;
}

std::string summary_text(const Simulation& sim, const Timeline& t) {
  std::string s;
  s += fmt::format("world: {}\n", t.header.world_name);
  s += fmt::format("provider: {} {}\n", t.header.provider.name, t.header.provider.version);
  s += fmt::format("seed: {}\n", t.header.seed);
  s += fmt::format("days: {}\n", t.header.num_days);
  s += fmt::format("decay mode: {}\n", to_string(t.header.decay_mode));
  s += fmt::format("status: {}\n", t.aborted ? "aborted (" + *t.aborted + ")" : std::string("complete"));
  s += fmt::format("activity records: {}\n", t.activity_record_count());
  s += fmt::format("conversations: {}\n", t.conversations.size());
  const auto count = [&](EventKind k) {
    return std::count_if(sim.events().begin(), sim.events().end(), [k](const Event& e) { return e.kind == k; });
  };
  s += fmt::format("replans: {}\n", count(EventKind::Replanned));
  s += fmt::format("provider calls: {}\n\n", sim.audit().total());

  ResultTable state{"final state", {"agent"}, {}, {}};
  for (Need n : kAllNeeds) state.header.emplace_back(to_string(n));
  state.header.insert(state.header.end(), {"emotion", "location"});
  for (const auto& a : sim.agents()) {
    std::vector<std::string> row{a.name()};
    for (Need n : kAllNeeds) row.push_back(std::to_string(a.needs.get(n)));
    row.emplace_back(to_string(a.emotion));
    row.push_back(a.current_location);
    state.rows.push_back(std::move(row));
  }
  s += state.to_text() + "\n";

  ResultTable minutes{"minutes spent on activities satisfying each need", {"agent"}, {}, {}};
  for (Need n : kAllNeeds) minutes.header.emplace_back(to_string(n));
  std::map<std::string, std::array<int, 5>> totals;
  for (const auto& name : t.header.agents) totals[name] = {};
  for (const auto& r : t.records) {
    for (const auto& a : r.agents) {
      for (Need n : a.satisfied) totals[a.name][static_cast<std::size_t>(n)] += t.header.step_minutes;
    }
  }
  for (const auto& [name, row_totals] : totals) {
    std::vector<std::string> row{name};
    for (int m : row_totals) row.push_back(std::to_string(m));
    minutes.rows.push_back(std::move(row));
  }
  s += minutes.to_text();
  return s;
}

void write_run(const fs::path& dir, const Simulation& sim, const Timeline& t, const std::vector<Event>& events) {
  fs::create_directories(dir);
  write_timeline(t, dir / "timeline.json");
  std::ostringstream log;
  write_events(events, log);
  write_file(dir / "events.log", log.str());
  write_file(dir / "summary.txt", summary_text(sim, t));
}

void emit_table(const ResultTable& table, const std::string& format, const std::string& out_dir,
                const std::string& stem, std::ostream& out) {
  out << (format == "csv" ? table.to_csv() : table.to_text());
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / (stem + ".csv"), table.to_csv());
    write_file(fs::path(out_dir) / (stem + ".txt"), table.to_text());
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Agent-based simulation of humanlike daily life driven by basic needs, emotion and relationships",
               "humanoid"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option values from a TOML/INI file");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress and provider warnings at info level");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a world and write timeline.json, events.log and summary.txt");
  std::string sim_world;
  int sim_days = 2;
  std::uint64_t sim_seed = 0;
  std::string sim_out = "out";
  WorldOptions sim_wo;
  ProviderOptions sim_po;
  simulate->add_option("--world", sim_world, "World file (YAML)")->required();
  simulate->add_option("--days", sim_days, "Days to simulate")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Run seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output directory")->capture_default_str();
  add_decay_options(simulate, sim_wo);
  add_provider_options(simulate, sim_po);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Needs, emotion and closeness ablation experiments");
  experiment->require_subcommand(1);
  WorldOptions exp_wo;
  ProviderOptions exp_po;
  std::uint64_t exp_seed = 0;
  int exp_days = 1;
  std::string exp_out;
  std::string exp_format = "text";
  std::vector<std::string> exp_needs;
  std::vector<std::string> exp_emotions;
  std::vector<int> exp_levels;
  auto* ex_needs = experiment->add_subcommand("needs", "Zero one basic need at a time and compare time spent on it");
  auto* ex_emotion = experiment->add_subcommand("emotion", "Pin every agent to one emotion and count expressing activities");
  auto* ex_closeness = experiment->add_subcommand("closeness", "Set every closeness to one level and measure conversations");
  ex_needs->add_option("--need", exp_needs, "Need to zero (default: all five)")
      ->check(CLI::IsMember({"fullness", "fun", "health", "social", "energy"}));
  ex_emotion->add_option("--emotion", exp_emotions, "Emotion to pin (default: all six non-neutral)")
      ->check(CLI::IsMember({"angry", "sad", "afraid", "disgusted", "surprised", "happy"}));
  ex_closeness->add_option("--level", exp_levels, "Closeness level (default: 0 5 10 15)")
      ->check(CLI::IsMember({0, 5, 10, 15}));
  for (auto* cmd : {ex_needs, ex_emotion, ex_closeness}) {
    cmd->add_option("--world", exp_wo.worlds, "World file, repeatable (default: the bundled worlds)");
    cmd->add_option("--seed", exp_seed, "Run seed")->capture_default_str();
    cmd->add_option("--days", exp_days, "Days per run")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--out", exp_out, "Also write <experiment>.csv and <experiment>.txt here");
    cmd->add_option("--format", exp_format, "Table format on stdout")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();
    add_decay_options(cmd, exp_wo);
    add_provider_options(cmd, exp_po);
  }

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Agreement and accuracy metrics over annotation files");
  metrics->require_subcommand(1);
  std::string met_input;
  bool met_counts = false;
  auto* m_kappa = metrics->add_subcommand(
      "kappa", "Fleiss' kappa; rows are items, columns are raters' labels (or category counts with --counts)");
  auto* m_f1 = metrics->add_subcommand("f1", "Micro-F1 of 'prediction,gold' rows (optional header line)");
  auto* m_vote = metrics->add_subcommand("vote", "Majority label per row of annotator labels");
  for (auto* cmd : {m_kappa, m_f1, m_vote}) {
    cmd->add_option("--input", met_input, "Input CSV file")->required();
  }
  m_kappa->add_flag("--counts", met_counts, "Rows hold per-category rater counts instead of labels");

  // export
  auto* exporter = app.add_subcommand("export", "Convert a timeline to flat CSV or normalised JSON");
  std::string exp_timeline;
  std::string exp_fmt = "csv";
  std::string exp_output;
  exporter->add_option("--timeline", exp_timeline, "timeline.json to read")->required();
  exporter->add_option("--format", exp_fmt, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  exporter->add_option("--output", exp_output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (verbose) logger().set_level(spdlog::level::info);

  try {
    if (simulate->parsed()) {
      auto world = load(sim_world, sim_wo);
      auto provider = make_provider(sim_po, sim_seed);
      RunOptions ro;
      ro.seed = sim_seed;
      ro.num_days = sim_days;
      if (verbose) ro.on_progress = [&](const std::string& line) { err << line << "\n"; };
      Simulation sim(world, *provider, ro);
      try {
        const auto t = sim.run();
        write_run(sim_out, sim, t, sim.events());
        out << fmt::format("wrote {} activity records and {} conversations to {}\n", t.activity_record_count(),
                           t.conversations.size(), sim_out);
      } catch (const SimulationAborted& e) {
        write_run(sim_out, sim, e.partial(), e.events());
        err << "error: simulation aborted: " << e.what() << " (partial output in " << sim_out << ")\n";
        return kExitProvider;
      }
      return kExitOk;
    }

    if (experiment->parsed()) {
      std::vector<WorldConfig> worlds;
      for (const auto& p : world_paths(exp_wo)) worlds.push_back(load(p, exp_wo));
      auto provider = make_provider(exp_po, exp_seed);
      const ExperimentOptions eo{exp_seed, exp_days};
      if (ex_needs->parsed()) {
        std::vector<Need> needs;
        for (const auto& n : exp_needs) needs.push_back(parse_need(n));
        if (needs.empty()) needs = {Need::Health, Need::Fullness, Need::Fun, Need::Social, Need::Energy};
        std::vector<NeedsResult> results;
        for (const auto& w : worlds) {
          for (Need n : needs) results.push_back(needs_experiment(w, n, *provider, eo));
        }
        emit_table(needs_table(results), exp_format, exp_out, "needs", out);
      } else if (ex_emotion->parsed()) {
        std::vector<Emotion> emotions;
        for (const auto& e : exp_emotions) emotions.push_back(parse_emotion(e));
        if (emotions.empty()) {
          emotions = {Emotion::Angry, Emotion::Sad, Emotion::Afraid, Emotion::Disgusted, Emotion::Surprised,
                      Emotion::Happy};
        }
        std::vector<EmotionResult> results;
        for (const auto& w : worlds) {
          for (Emotion e : emotions) results.push_back(emotion_experiment(w, e, *provider, eo));
        }
        emit_table(emotion_table(results), exp_format, exp_out, "emotion", out);
      } else {
        std::vector<int> levels = exp_levels;
        if (levels.empty()) levels.assign(std::begin(kClosenessLevels), std::end(kClosenessLevels));
        std::vector<ClosenessResult> results;
        for (const auto& w : worlds) {
          for (int level : levels) results.push_back(closeness_experiment(w, level, *provider, eo));
        }
        emit_table(closeness_table(results), exp_format, exp_out, "closeness", out);
      }
      return kExitOk;
    }

    if (metrics->parsed()) {
      const auto rows = read_csv(met_input);
      if (m_kappa->parsed()) {
        std::vector<std::vector<int>> counts;
        if (met_counts) {
          for (const auto& r : rows) {
            std::vector<int> c;
            for (const auto& cell : r) {
              try {
                std::size_t used = 0;
                c.push_back(std::stoi(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
              } catch (const std::logic_error&) {
                throw InputError("not an integer count: '" + cell + "'");
              }
            }
            counts.push_back(std::move(c));
          }
        } else {
          counts = count_matrix(rows);
        }
        out << number(fleiss_kappa(counts)) << "\n";
      } else if (m_f1->parsed()) {
        std::vector<std::string> pred, gold;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const auto& r = rows[i];
          if (i == 0 && r.size() == 2 && r[0] == "prediction" && r[1] == "gold") continue;
          if (r.size() != 2) throw InputError(fmt::format("row {}: expected 'prediction,gold'", i + 1));
          pred.push_back(r[0]);
          gold.push_back(r[1]);
        }
        out << number(micro_f1(pred, gold)) << "\n";
      } else {
        for (const auto& label : majority_vote(rows)) out << label << "\n";
      }
      return kExitOk;
    }

    if (exporter->parsed()) {
      const auto t = read_timeline(exp_timeline);
      std::ostringstream s;
      if (exp_fmt == "csv") {
        write_timeline_csv(t, s);
      } else {
        s << timeline_to_json(t);
      }
      if (exp_output.empty()) {
        out << s.str();
      } else {
        write_file(exp_output, s.str());
      }
      return kExitOk;
    }
  } catch (const WorldConfigError& e) {
    err << "error: invalid world configuration:\n";
    for (const auto& d : e.diagnostics()) err << "  " << d.str() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MetricsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TimelineFormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ProviderError& e) {
    err << "error: provider: " << e.what() << "\n";
    return kExitProvider;
  } catch (const SimulationAborted& e) {
    err << "error: simulation aborted: " << e.what() << "\n";
    return kExitProvider;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace humanoid
