#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "fsforge/classifiers/classifier.hpp"

namespace fsforge {

/// Best-first binary decision tree on Gini impurity.
///
/// Every leaf on the frontier carries its best split, scored by the drop in
/// size-weighted impurity (n*G(node) - n_l*G(left) - n_r*G(right)) / N. The
/// leaf with the largest drop is expanded next, whatever its depth. Nominal
/// splits test one value against the rest; numeric splits test v <= threshold.
/// Missing cells go right. A leaf stops being expandable when it has fewer than two instances or no
/// split reduces impurity. Leaves predict Laplace-smoothed class frequencies.
class BestFirstTree final : public Classifier {
 public:
  struct Split {
    std::size_t attribute = 0;
    bool numeric = false;
    double value = 0.0;  // nominal index, or numeric threshold
    double reduction = 0.0;
    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
  };

  struct Node {
    std::vector<double> class_counts;
    std::size_t depth = 0;
    std::size_t attribute = 0;
    bool numeric = false;
    double value = 0.0;
    std::optional<std::size_t> left;
    std::optional<std::size_t> right;

    bool is_leaf() const { return !left.has_value(); }
  };

  struct Expansion {
    std::size_t node = 0;
    std::size_t depth = 0;
    double reduction = 0.0;
  };

  ClassifierId id() const override { return ClassifierId::bf_tree; }

  static double gini(const std::vector<double>& counts) {
    const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (n <= 0) return 0.0;
    double s = 1.0;
    for (double c : counts) s -= (c / n) * (c / n);
    return s;
  }

  void fit(const Dataset& d) override {
    if (d.empty()) throw DataError("bf_tree: empty training set");
    nodes_.clear();
    expansions_.clear();
    schema_ = d.schema();
    total_ = static_cast<double>(d.size());

    struct Pending {
      std::size_t node;
      std::vector<std::size_t> rows;
      std::optional<Split> split;
    };
    std::vector<Pending> frontier;

    auto make_node = [&](const std::vector<std::size_t>& rows, std::size_t depth) {
      Node node;
      node.class_counts.assign(d.num_classes(), 0.0);
      for (std::size_t r : rows) node.class_counts[d[r].label] += 1.0;
      node.depth = depth;
      nodes_.push_back(std::move(node));
      const std::size_t id = nodes_.size() - 1;
      frontier.push_back({id, rows, best_split(d, rows, nodes_[id].class_counts)});
    };

    std::vector<std::size_t> all(d.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    make_node(all, 0);

    for (;;) {
      // Largest reduction first; the earlier-created leaf wins ties.
      std::optional<std::size_t> pick;
      for (std::size_t f = 0; f < frontier.size(); ++f) {
        if (!frontier[f].split) continue;
        if (!pick || frontier[f].split->reduction > frontier[*pick].split->reduction) pick = f;
      }
      if (!pick) break;
      Pending p = std::move(frontier[*pick]);
      frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(*pick));
      const Split& s = *p.split;
      expansions_.push_back({p.node, nodes_[p.node].depth, s.reduction});
      nodes_[p.node].attribute = s.attribute;
      nodes_[p.node].numeric = s.numeric;
      nodes_[p.node].value = s.value;
      const std::size_t depth = nodes_[p.node].depth + 1;
      nodes_[p.node].left = nodes_.size();
      make_node(s.left_rows, depth);
      nodes_[p.node].right = nodes_.size();
      make_node(s.right_rows, depth);
    }
    fitted_ = true;
  }

  Distribution predict_distribution(const Instance& x) const override {
    require_fitted();
    std::size_t at = 0;
    while (!nodes_[at].is_leaf()) {
      const Node& n = nodes_[at];
      const double v = x.values[n.attribute];
      bool go_left;
      if (is_missing(v)) {
        go_left = false;
      } else if (n.numeric) {
        go_left = v <= n.value;
      } else {
        go_left = v == n.value;
      }
      at = go_left ? *n.left : *n.right;
    }
    return laplace_distribution(nodes_[at].class_counts);
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Expansion>& expansions() const noexcept { return expansions_; }
  std::size_t leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
  }
  std::size_t depth() const {
    std::size_t m = 0;
    for (const auto& n : nodes_) m = std::max(m, n.depth);
    return m;
  }

 private:
  static constexpr double kMinReduction = 1e-12;

  std::optional<Split> best_split(const Dataset& d, const std::vector<std::size_t>& rows,
                                  const std::vector<double>& counts) const {
    if (rows.size() < 2) return std::nullopt;
    const double n = static_cast<double>(rows.size());
    const double parent = n * gini(counts);
    if (parent <= 0.0) return std::nullopt;
    const std::size_t n_classes = counts.size();

    std::optional<Split> best;
    auto consider = [&](std::size_t j, bool numeric, double value, const std::vector<double>& left) {
      std::vector<double> right(n_classes);
      double nl = 0, nr = 0;
      for (std::size_t c = 0; c < n_classes; ++c) {
        right[c] = counts[c] - left[c];
        nl += left[c];
        nr += right[c];
      }
      if (nl == 0 || nr == 0) return;
      const double reduction = (parent - nl * gini(left) - nr * gini(right)) / total_;
      if (reduction <= kMinReduction) return;
      if (!best || reduction > best->reduction) {
        best = Split{j, numeric, value, reduction, {}, {}};
      }
    };

    for (std::size_t j = 0; j < schema_.size(); ++j) {
      if (schema_[j].is_nominal()) {
        const std::size_t arity = schema_[j].arity();
        std::vector<std::vector<double>> by_value(arity, std::vector<double>(n_classes, 0.0));
        for (std::size_t r : rows) {
          const double v = d[r].values[j];
          if (!is_missing(v)) by_value[nominal_index(v)][d[r].label] += 1.0;
        }
        for (std::size_t v = 0; v < arity; ++v) consider(j, false, static_cast<double>(v), by_value[v]);
      } else {
        std::vector<std::pair<double, std::size_t>> sorted;
        for (std::size_t r : rows) {
          if (!is_missing(d[r].values[j])) sorted.emplace_back(d[r].values[j], d[r].label);
        }
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> left(n_classes, 0.0);
        for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
          left[sorted[k].second] += 1.0;
          if (sorted[k].first == sorted[k + 1].first) continue;
          consider(j, true, 0.5 * (sorted[k].first + sorted[k + 1].first), left);
        }
      }
    }
    if (!best) return std::nullopt;
    for (std::size_t r : rows) {
      const double v = d[r].values[best->attribute];
      bool go_left;
      if (is_missing(v)) {
        go_left = false;
      } else if (best->numeric) {
        go_left = v <= best->value;
      } else {
        go_left = v == best->value;
      }
      (go_left ? best->left_rows : best->right_rows).push_back(r);
    }
    return best;
  }

  std::vector<AttributeSpec> schema_;
  std::vector<Node> nodes_;
  std::vector<Expansion> expansions_;
  double total_ = 0.0;
};

}  // namespace fsforge
