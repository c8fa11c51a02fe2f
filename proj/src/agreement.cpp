#include "humanoid/agreement.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "humanoid/domain.hpp"
#include "humanoid/log.hpp"
#include "humanoid/text.hpp"

namespace humanoid {

double fleiss_kappa(const std::vector<std::vector<int>>& counts) {
  if (counts.empty()) throw MetricsError("fleiss_kappa: no items");
  const std::size_t k = counts.front().size();
  if (k == 0) throw MetricsError("fleiss_kappa: no categories");
  const long n = std::accumulate(counts.front().begin(), counts.front().end(), 0L);
  if (n < 2) throw MetricsError("fleiss_kappa: need at least two raters per item");

  const double N = static_cast<double>(counts.size());
  std::vector<double> column(k, 0.0);
  double p_bar = 0.0;
  bool unanimous = true;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = counts[i];
    if (row.size() != k) {
      throw MetricsError("fleiss_kappa: item " + std::to_string(i) + " has " + std::to_string(row.size()) +
                         " categories, expected " + std::to_string(k));
    }
    long sum = 0;
    long squares = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (row[j] < 0) throw MetricsError("fleiss_kappa: negative count in item " + std::to_string(i));
      sum += row[j];
      squares += static_cast<long>(row[j]) * row[j];
      column[j] += row[j];
      if (row[j] != 0 && row[j] != n) unanimous = false;
    }
    if (sum != n) {
      throw MetricsError("fleiss_kappa: item " + std::to_string(i) + " has " + std::to_string(sum) +
                         " ratings, expected " + std::to_string(n));
    }
    p_bar += static_cast<double>(squares - n) / static_cast<double>(n * (n - 1));
  }
  if (unanimous) return 1.0;
  p_bar /= N;

  double p_e = 0.0;
  for (double c : column) {
    const double p = c / (N * static_cast<double>(n));
    p_e += p * p;
  }
  if (p_e >= 1.0) throw MetricsError("fleiss_kappa: undefined, chance agreement is 1 without full agreement");
  return (p_bar - p_e) / (1.0 - p_e);
}

double micro_f1(const std::vector<std::string>& predictions, const std::vector<std::string>& gold) {
  if (predictions.size() != gold.size()) {
    throw MetricsError("micro_f1: " + std::to_string(predictions.size()) + " predictions for " +
                       std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) throw MetricsError("micro_f1: no items");
  long tp = 0;
  long fp = 0;
  long fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] == gold[i]) {
      ++tp;
    } else {
      ++fp;  // predicted label was wrong
      ++fn;  // gold label was missed
    }
  }
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

const std::vector<std::string>& default_label_order() {
  static const std::vector<std::string> order = [] {
    std::vector<std::string> o;
    for (Emotion e : kAllEmotions) o.emplace_back(to_string(e));
    o.emplace_back("yes");
    o.emplace_back("no");
    return o;
  }();
  return order;
}

std::vector<std::string> majority_vote(const std::vector<std::vector<std::string>>& annotations,
                                       const std::vector<std::string>& tie_order) {
  auto rank = [&](const std::string& label) {
    auto it = std::find(tie_order.begin(), tie_order.end(), label);
    return std::make_pair(static_cast<std::size_t>(it - tie_order.begin()), label);
  };
  std::vector<std::string> out;
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const auto& labels = annotations[i];
    if (labels.empty()) throw MetricsError("majority_vote: item " + std::to_string(i) + " has no annotations");
    std::map<std::string, int> tally;
    for (const auto& l : labels) ++tally[l];
    int best = 0;
    for (const auto& [label, count] : tally) best = std::max(best, count);
    std::vector<std::string> leaders;
    for (const auto& [label, count] : tally) {
      if (count == best) leaders.push_back(label);
    }
    std::sort(leaders.begin(), leaders.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
    if (leaders.size() > 1) {
      logger().warn("majority_vote: item {} tied between {}; choosing {}", i, text::join(leaders, ", "),
                    leaders.front());
    }
    out.push_back(leaders.front());
  }
  return out;
}

std::vector<std::vector<int>> count_matrix(const std::vector<std::vector<std::string>>& annotations,
                                           std::vector<std::string> categories) {
  if (categories.empty()) {
    for (const auto& item : annotations) {
      for (const auto& l : item) {
        if (std::find(categories.begin(), categories.end(), l) == categories.end()) categories.push_back(l);
      }
    }
  }
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    std::vector<int> row(categories.size(), 0);
    for (const auto& l : annotations[i]) {
      auto it = std::find(categories.begin(), categories.end(), l);
      if (it == categories.end()) {
        throw MetricsError("count_matrix: item " + std::to_string(i) + " uses unknown label '" + l + "'");
      }
      ++row[static_cast<std::size_t>(it - categories.begin())];
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace humanoid
