#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace humanoid {

class MetricsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fleiss' kappa over an items x categories matrix of rater counts. Every row
/// must have the same length and sum to the same rater count n >= 2.
/// Unanimous agreement on every item gives exactly 1.0.
double fleiss_kappa(const std::vector<std::vector<int>>& counts);

/// Micro-averaged F1 over pooled per-label true/false positives and false
/// negatives. For one label per item this equals accuracy.
double micro_f1(const std::vector<std::string>& predictions, const std::vector<std::string>& gold);

/// Tie-break order used by majority_vote when none is given: the seven
/// emotion labels in canonical order, then yes/no. Labels outside the order
/// rank after it alphabetically.
const std::vector<std::string>& default_label_order();

/// Modal label per item. Ties go to the label ranked first in `tie_order`,
/// with a warning.
std::vector<std::string> majority_vote(const std::vector<std::vector<std::string>>& annotations,
                                       const std::vector<std::string>& tie_order = default_label_order());

/// Category-count matrix from per-item label lists (categories in first-seen
/// order unless `categories` is given).
std::vector<std::vector<int>> count_matrix(const std::vector<std::vector<std::string>>& annotations,
                                           std::vector<std::string> categories = {});

}  // namespace humanoid
