#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "humanoid/agreement.hpp"

using namespace humanoid;

namespace {

// Agreement by enumerating rater pairs, independent of the closed form.
double kappa_by_pairs(const std::vector<std::vector<int>>& counts) {
  std::vector<std::vector<int>> ratings;  // item -> category of each rating
  std::vector<int> pool;
  for (const auto& row : counts) {
    std::vector<int> r;
    for (std::size_t j = 0; j < row.size(); ++j) {
      for (int c = 0; c < row[j]; ++c) r.push_back(static_cast<int>(j));
    }
    pool.insert(pool.end(), r.begin(), r.end());
    ratings.push_back(r);
  }
  double observed = 0.0;
  for (const auto& r : ratings) {
    long agree = 0, pairs = 0;
    for (std::size_t a = 0; a < r.size(); ++a) {
      for (std::size_t b = 0; b < r.size(); ++b) {
        if (a == b) continue;
        ++pairs;
        if (r[a] == r[b]) ++agree;
      }
    }
    observed += static_cast<double>(agree) / pairs;
  }
  observed /= ratings.size();
  long same = 0;
  for (int x : pool) {
    for (int y : pool) same += x == y;
  }
  const double chance = static_cast<double>(same) / (static_cast<double>(pool.size()) * pool.size());
  return (observed - chance) / (1.0 - chance);
}

double f1_by_labels(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  std::vector<std::string> labels = pred;
  labels.insert(labels.end(), gold.begin(), gold.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  long tp = 0, fp = 0, fn = 0;
  for (const auto& l : labels) {
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool p = pred[i] == l, g = gold[i] == l;
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
  }
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

const std::vector<std::vector<int>> kFleissTable = {
    {0, 0, 0, 0, 14}, {0, 2, 6, 4, 2}, {0, 0, 3, 5, 6}, {0, 3, 9, 2, 0}, {2, 2, 8, 1, 1},
    {7, 7, 0, 0, 0},  {3, 2, 6, 3, 0}, {2, 5, 3, 2, 2}, {6, 5, 2, 1, 0}, {0, 2, 2, 3, 7}};

}  // namespace

TEST_CASE("kappa of a small hand-worked table is one third") {
  const std::vector<std::vector<int>> counts = {{2, 1}, {1, 2}, {3, 0}, {0, 3}};
  CHECK(fleiss_kappa(counts) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(kappa_by_pairs(counts) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("kappa matches pair enumeration on the 14-rater psychiatric table") {
  const double k = fleiss_kappa(kFleissTable);
  CHECK(std::abs(k - kappa_by_pairs(kFleissTable)) < 1e-9);
  CHECK(k == doctest::Approx(0.210).epsilon(1e-3));
}

TEST_CASE("kappa is exactly 1 when every item is unanimous") {
  CHECK(fleiss_kappa({{3, 0, 0}, {0, 3, 0}, {0, 0, 3}}) == 1.0);
  CHECK(fleiss_kappa({{0, 5}, {0, 5}}) == 1.0);
}

TEST_CASE("kappa agrees with pair enumeration on random tables") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int items = 2 + static_cast<int>(rng() % 12);
    const int cats = 2 + static_cast<int>(rng() % 5);
    const int raters = 2 + static_cast<int>(rng() % 6);
    std::vector<std::vector<int>> counts(items, std::vector<int>(cats, 0));
    for (auto& row : counts) {
      for (int r = 0; r < raters; ++r) ++row[rng() % cats];
    }
    bool unanimous = true;
    std::vector<int> col(cats, 0);
    for (const auto& row : counts) {
      for (int j = 0; j < cats; ++j) {
        col[j] += row[j];
        if (row[j] != 0 && row[j] != raters) unanimous = false;
      }
    }
    if (unanimous) continue;
    CHECK(std::abs(fleiss_kappa(counts) - kappa_by_pairs(counts)) < 1e-9);
  }
}

TEST_CASE("kappa rejects malformed tables") {
  CHECK_THROWS_AS(fleiss_kappa({}), MetricsError);
  CHECK_THROWS_AS(fleiss_kappa({{1, 0}}), MetricsError);
  CHECK_THROWS_AS(fleiss_kappa({{2, 1}, {1, 1}}), MetricsError);
  CHECK_THROWS_AS(fleiss_kappa({{2, 1}, {1, 1, 1}}), MetricsError);
  CHECK_THROWS_AS(fleiss_kappa({{4, -1}, {1, 2}}), MetricsError);
}

TEST_CASE("micro-F1 on a hand-worked fixture") {
  // tp 3, fp 1, fn 1
  const std::vector<std::string> pred = {"a", "b", "a", "c"}, gold = {"a", "a", "a", "c"};
  CHECK(micro_f1(pred, gold) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(f1_by_labels(pred, gold) - 0.75) < 1e-12);
  CHECK(micro_f1({"yes", "no"}, {"no", "yes"}) == 0.0);
}

TEST_CASE("micro-F1 equals accuracy on 1000 random single-label instances") {
  std::mt19937 rng(11);
  const std::vector<std::string> labels = {"angry", "sad", "afraid", "surprised", "happy", "neutral", "disgusted"};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const std::size_t k = 2 + rng() % (labels.size() - 1);
    std::vector<std::string> pred, gold;
    long correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pred.push_back(labels[rng() % k]);
      gold.push_back(labels[rng() % k]);
      correct += pred.back() == gold.back();
    }
    const double f1 = micro_f1(pred, gold);
    REQUIRE(std::abs(f1 - static_cast<double>(correct) / n) < 1e-9);
    REQUIRE(std::abs(f1 - f1_by_labels(pred, gold)) < 1e-9);
  }
}

TEST_CASE("micro-F1 rejects mismatched or empty input") {
  CHECK_THROWS_AS(micro_f1({"a"}, {"a", "b"}), MetricsError);
  CHECK_THROWS_AS(micro_f1({}, {}), MetricsError);
}

TEST_CASE("majority vote picks the mode and breaks ties by label order") {
  const auto v = majority_vote({{"happy", "happy", "sad"}, {"yes", "no", "no"}, {"sad", "angry"}, {"no", "yes"}});
  CHECK(v == std::vector<std::string>{"happy", "no", "angry", "yes"});
  CHECK(majority_vote({{"b", "a"}}, {}) == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(majority_vote({{}}), MetricsError);
}

TEST_CASE("count matrix tallies labels per item") {
  const auto m = count_matrix({{"yes", "no", "yes"}, {"no", "no", "no"}});
  CHECK(m == std::vector<std::vector<int>>{{2, 1}, {0, 3}});
  CHECK(count_matrix({{"no"}}, {"yes", "no"}) == std::vector<std::vector<int>>{{0, 1}});
  CHECK_THROWS_AS(count_matrix({{"maybe"}}, {"yes", "no"}), MetricsError);
}
