#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "humanoid/cognition.hpp"
#include "humanoid/domain.hpp"
#include "humanoid/world.hpp"

namespace humanoid {

struct ExperimentOptions {
  std::uint64_t seed = 0;
  int num_days = 1;
};

/// Per-agent result of zeroing one need.
struct NeedsRow {
  std::string agent;
  int baseline_minutes = 0;
  int treatment_minutes = 0;
  /// Absent ("undefined") when the baseline spent no time on the need.
  std::optional<double> change_percent;
};

struct NeedsResult {
  std::string world;
  Need need = Need::Fullness;
  std::vector<NeedsRow> rows;  // agents in name order
};

/// Baseline run with default needs against a run where `need` starts at zero
/// for every agent. Time is step length times the steps whose activity
/// satisfies the need.
NeedsResult needs_experiment(const WorldConfig& world, Need need, const CognitionProvider& provider,
                             const ExperimentOptions& options = {});

struct EmotionRow {
  std::string agent;
  int baseline_count = 0;
  int treatment_count = 0;
  int delta = 0;
};

struct EmotionResult {
  std::string world;
  Emotion emotion = Emotion::Happy;
  std::vector<EmotionRow> rows;
  /// EmotionChanged events seen during the pinned run (expected 0).
  int pinned_emotion_writes = 0;
};

/// Counts steps whose activity expresses `emotion`, a normal run starting from
/// neutral against a run
/// with every agent's emotion pinned. Throws std::invalid_argument for neutral.
EmotionResult emotion_experiment(const WorldConfig& world, Emotion emotion, const CognitionProvider& provider,
                                 const ExperimentOptions& options = {});

inline constexpr int kConversationsMeasured = 5;

struct ClosenessResult {
  std::string world;
  int level = 0;
  int conversations = 0;  // measured, at most kConversationsMeasured
  double mean_turns = 0.0;
  double percent_positive = 0.0;
  int total_turns = 0;
  int positive_turns = 0;
  /// Fewer than kConversationsMeasured conversations happened.
  bool flagged = false;
};

/// Sets every pairwise closeness to `level` (0, 5, 10 or 15) and measures the
/// first five conversations of the run.
ClosenessResult closeness_experiment(const WorldConfig& world, int level, const CognitionProvider& provider,
                                     const ExperimentOptions& options = {});

inline constexpr int kClosenessLevels[] = {0, 5, 10, 15};

/// Row/column table rendered as CSV or aligned text.
struct ResultTable {
  std::string title;
  std::vector<std::string> header;  // first entry labels the row column
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;

  std::string to_csv() const;
  std::string to_text() const;
};

/// "John Lin" -> "JL", "Big Bang Theory" -> "BBT".
std::string initials(const std::string& name);

/// Rows = needs, columns = agents across worlds plus the mean.
ResultTable needs_table(const std::vector<NeedsResult>& results);
/// Rows = emotions, columns = agents across worlds plus the mean.
ResultTable emotion_table(const std::vector<EmotionResult>& results);
/// Rows = closeness bands, columns = mean turns then % positive per world.
ResultTable closeness_table(const std::vector<ClosenessResult>& results);

}  // namespace humanoid
