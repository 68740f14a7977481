#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "fsforge/classifiers/classifier.hpp"
#include "fsforge/random.hpp"

namespace fsforge {

struct RuleLearnerParams {
  std::uint64_t seed = 0;
};

/// IREP-style sequential covering rule learner.
///
/// Classes are learned from least to most frequent; the most frequent class
/// becomes the default rule. For each class the remaining instances are split
/// 2/3 grow, 1/3 prune. A rule is grown greedily by FOIL gain until it covers
/// no grow-set negatives, then its trailing conditions are pruned to maximize
/// (p - n) / (p + n) on the prune set. The rule is kept only while its
/// prune-set error n / (p + n) is below 0.5; covered instances are then
/// removed. Each rule predicts the Laplace-smoothed class frequencies of the
/// instances it covered when it was learned.
class RuleLearner final : public Classifier {
 public:
  struct Condition {
    enum class Op { equals, at_most, at_least };
    std::size_t attribute = 0;
    Op op = Op::equals;
    double value = 0.0;

    bool covers(const Instance& x) const {
      const double v = x.values[attribute];
      if (is_missing(v)) return false;
      switch (op) {
        case Op::equals: return v == value;
        case Op::at_most: return v <= value;
        case Op::at_least: return v >= value;
      }
      return false;
    }
  };

  struct Rule {
    std::size_t target = 0;
    std::vector<Condition> conditions;
    std::vector<double> class_counts;
    std::size_t prune_positives = 0;
    std::size_t prune_negatives = 0;

    bool covers(const Instance& x) const {
      return std::all_of(conditions.begin(), conditions.end(),
                         [&](const Condition& c) { return c.covers(x); });
    }
    double prune_error() const {
      const std::size_t total = prune_positives + prune_negatives;
      return total == 0 ? 1.0 : static_cast<double>(prune_negatives) / static_cast<double>(total);
    }
  };

  explicit RuleLearner(RuleLearnerParams params = {}) : params_(params) {}

  ClassifierId id() const override { return ClassifierId::rule_learner; }

  void fit(const Dataset& d) override {
    if (d.empty()) throw DataError("rule_learner: empty training set");
    rules_.clear();
    const std::size_t n_classes = d.num_classes();
    const std::vector<std::size_t> counts = d.class_counts();
    std::vector<std::size_t> order(n_classes);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });

    Rng rng(derive_seed(params_.seed, "rule_learner"));
    std::vector<std::size_t> remaining(d.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});

    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      const std::size_t target = order[k];
      for (;;) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t r : remaining) (d[r].label == target ? pos : neg).push_back(r);
        if (pos.empty()) break;
        rng.shuffle(std::span<std::size_t>(pos));
        rng.shuffle(std::span<std::size_t>(neg));
        const std::size_t pos_prune = pos.size() / 3;
        const std::size_t neg_prune = neg.size() / 3;
        std::vector<std::size_t> grow(pos.begin() + static_cast<std::ptrdiff_t>(pos_prune), pos.end());
        grow.insert(grow.end(), neg.begin() + static_cast<std::ptrdiff_t>(neg_prune), neg.end());
        std::vector<std::size_t> prune(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(pos_prune));
        prune.insert(prune.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(neg_prune));

        Rule rule = grow_rule(d, target, grow);
        prune_rule(d, rule, prune);
        if (rule.prune_error() >= 0.5) break;

        rule.class_counts.assign(n_classes, 0.0);
        std::vector<std::size_t> kept;
        for (std::size_t r : remaining) {
          if (rule.covers(d[r])) {
            rule.class_counts[d[r].label] += 1.0;
          } else {
            kept.push_back(r);
          }
        }
        if (rule.class_counts[target] == 0.0) break;
        remaining = std::move(kept);
        rules_.push_back(std::move(rule));
      }
    }

    default_counts_.assign(n_classes, 0.0);
    for (std::size_t r : remaining) default_counts_[d[r].label] += 1.0;
    if (remaining.empty()) {
      for (std::size_t c = 0; c < n_classes; ++c) default_counts_[c] = static_cast<double>(counts[c]);
    }
    fitted_ = true;
  }

  Distribution predict_distribution(const Instance& x) const override {
    require_fitted();
    for (const auto& rule : rules_) {
      if (rule.covers(x)) return laplace_distribution(rule.class_counts);
    }
    return laplace_distribution(default_counts_);
  }

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  const std::vector<double>& default_counts() const noexcept { return default_counts_; }

 private:
  static double foil_gain(double p0, double n0, double p1, double n1) {
    if (p1 <= 0) return -INFINITY;
    return p1 * (std::log2(p1 / (p1 + n1)) - std::log2(p0 / (p0 + n0)));
  }

  static Rule grow_rule(const Dataset& d, std::size_t target, std::vector<std::size_t> covered) {
    Rule rule;
    rule.target = target;
    std::vector<bool> used(d.num_attributes(), false);
    for (;;) {
      double p0 = 0, n0 = 0;
      for (std::size_t r : covered) (d[r].label == target ? p0 : n0) += 1.0;
      if (n0 == 0 || p0 == 0) break;

      std::optional<Condition> best;
      double best_gain = 0.0;
      auto consider = [&](const Condition& c) {
        double p1 = 0, n1 = 0;
        for (std::size_t r : covered) {
          if (c.covers(d[r])) (d[r].label == target ? p1 : n1) += 1.0;
        }
        const double g = foil_gain(p0, n0, p1, n1);
        if (g > best_gain) {
          best_gain = g;
          best = c;
        }
      };
      for (std::size_t j = 0; j < d.num_attributes(); ++j) {
        const AttributeSpec& a = d.attribute(j);
        if (a.is_nominal()) {
          if (used[j]) continue;
          for (std::size_t v = 0; v < a.arity(); ++v) {
            consider({j, Condition::Op::equals, static_cast<double>(v)});
          }
        } else {
          std::vector<double> values;
          for (std::size_t r : covered) {
            if (!is_missing(d[r].values[j])) values.push_back(d[r].values[j]);
          }
          std::sort(values.begin(), values.end());
          values.erase(std::unique(values.begin(), values.end()), values.end());
          for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            const double t = 0.5 * (values[k] + values[k + 1]);
            consider({j, Condition::Op::at_most, t});
            consider({j, Condition::Op::at_least, t});
          }
        }
      }
      if (!best) break;
      used[best->attribute] = true;
      rule.conditions.push_back(*best);
      std::erase_if(covered, [&](std::size_t r) { return !best->covers(d[r]); });
    }
    return rule;
  }

  // Keeps the prefix of conditions with the best prune-set value; shorter wins ties.
  static void prune_rule(const Dataset& d, Rule& rule, const std::vector<std::size_t>& prune) {
    std::size_t best_len = rule.conditions.size();
    double best_value = -INFINITY;
    std::size_t best_p = 0, best_n = 0;
    for (std::size_t len = rule.conditions.size(); len >= 1; --len) {
      std::size_t p = 0, n = 0;
      for (std::size_t r : prune) {
        bool hit = true;
        for (std::size_t c = 0; c < len && hit; ++c) hit = rule.conditions[c].covers(d[r]);
        if (hit) ++(d[r].label == rule.target ? p : n);
      }
      if (p + n == 0) continue;
      const double value = (static_cast<double>(p) - static_cast<double>(n)) / static_cast<double>(p + n);
      if (value >= best_value) {
        best_value = value;
        best_len = len;
        best_p = p;
        best_n = n;
      }
    }
    rule.conditions.resize(best_len);
    rule.prune_positives = best_p;
    rule.prune_negatives = best_n;
  }

  RuleLearnerParams params_;
  std::vector<Rule> rules_;
  std::vector<double> default_counts_;
};

}  // namespace fsforge
