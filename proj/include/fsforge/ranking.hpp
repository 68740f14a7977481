#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fsforge/dataset.hpp"
#include "fsforge/error.hpp"

namespace fsforge {

// Rows index attribute values, columns index classes.
using ContingencyTable = std::vector<std::vector<double>>;

inline constexpr double kLog2Base = 2.0;

inline double entropy_of_counts(std::span<const double> counts, double base = kLog2Base) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (n <= 0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0) h -= (c / n) * std::log(c / n);
  }
  return std::max(0.0, h / std::log(base));
}

template <typename Symbol>
double entropy(std::span<const Symbol> labels, double base = kLog2Base) {
  if (labels.empty()) throw DataError("entropy of an empty sequence");
  std::map<Symbol, double> counts;
  for (const auto& s : labels) counts[s] += 1.0;
  std::vector<double> c;
  for (const auto& [_, n] : counts) c.push_back(n);
  return entropy_of_counts(c, base);
}

template <typename Symbol>
double entropy(const std::vector<Symbol>& labels, double base = kLog2Base) {
  return entropy(std::span<const Symbol>(labels), base);
}

inline ContingencyTable transpose(const ContingencyTable& t) {
  if (t.empty()) return {};
  ContingencyTable out(t.front().size(), std::vector<double>(t.size(), 0.0));
  for (std::size_t r = 0; r < t.size(); ++r) {
    for (std::size_t c = 0; c < t[r].size(); ++c) out[c][r] = t[r][c];
  }
  return out;
}

// H(column variable) from the column marginals.
inline double column_entropy(const ContingencyTable& t, double base = kLog2Base) {
  if (t.empty()) return 0.0;
  std::vector<double> col(t.front().size(), 0.0);
  for (const auto& row : t) {
    for (std::size_t c = 0; c < row.size(); ++c) col[c] += row[c];
  }
  return entropy_of_counts(col, base);
}

// H(row variable) from the row marginals.
inline double row_entropy(const ContingencyTable& t, double base = kLog2Base) {
  std::vector<double> rows;
  for (const auto& row : t) rows.push_back(std::accumulate(row.begin(), row.end(), 0.0));
  return entropy_of_counts(rows, base);
}

/// IG = H(Y) - sum_v P(X=v) H(Y | X=v), with X on rows and Y on columns.
inline double info_gain(const ContingencyTable& t, double base = kLog2Base) {
  double n = 0.0;
  for (const auto& row : t) n += std::accumulate(row.begin(), row.end(), 0.0);
  if (n <= 0) return 0.0;
  double conditional = 0.0;
  for (const auto& row : t) {
    const double nv = std::accumulate(row.begin(), row.end(), 0.0);
    if (nv > 0) conditional += (nv / n) * entropy_of_counts(row, base);
  }
  return std::max(0.0, column_entropy(t, base) - conditional);
}

inline double symmetrical_uncertainty(const ContingencyTable& t, double base = kLog2Base) {
  const double hx = row_entropy(t, base);
  const double hy = column_entropy(t, base);
  if (hx + hy <= 0) return 0.0;
  return std::clamp(2.0 * info_gain(t, base) / (hx + hy), 0.0, 1.0);
}

inline ContingencyTable contingency(const Dataset& d, std::size_t attribute) {
  const AttributeSpec& a = d.attribute(attribute);
  if (!a.is_nominal()) {
    throw DataError("attribute '" + a.name + "' is numeric; discretize it before scoring");
  }
  ContingencyTable t(a.arity(), std::vector<double>(d.num_classes(), 0.0));
  for (const auto& inst : d.instances()) {
    const double v = inst.values[attribute];
    if (!is_missing(v)) t[nominal_index(v)][inst.label] += 1.0;
  }
  return t;
}

inline double info_gain(const Dataset& d, std::size_t attribute, double base = kLog2Base) {
  return info_gain(contingency(d, attribute), base);
}

inline double symmetrical_uncertainty(const Dataset& d, std::size_t attribute,
                                      double base = kLog2Base) {
  return symmetrical_uncertainty(contingency(d, attribute), base);
}

/// Equal-width binning of a numeric attribute into `bins` intervals over
/// [min, max]; the upper edge of each interval belongs to the next one, and
/// max falls in the last. A constant attribute becomes a single bin.
inline Dataset discretize(const Dataset& d, std::size_t attribute, std::size_t bins) {
  const AttributeSpec& a = d.attribute(attribute);
  if (!a.is_numeric()) throw DataError("attribute '" + a.name + "' is already nominal");
  if (bins < 2) throw ConfigError("discretize needs at least 2 bins");
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& inst : d.instances()) {
    const double v = inst.values[attribute];
    if (is_missing(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const bool constant = !(hi > lo);
  const std::size_t used = constant ? 1 : bins;
  std::vector<std::string> symbols;
  for (std::size_t b = 0; b < used; ++b) symbols.push_back("bin" + std::to_string(b));

  std::vector<AttributeSpec> schema = d.schema();
  schema[attribute] = AttributeSpec::make_nominal(a.name, std::move(symbols));
  std::vector<Instance> rows = d.instances();
  const double width = constant ? 1.0 : (hi - lo) / static_cast<double>(bins);
  for (auto& inst : rows) {
    double& v = inst.values[attribute];
    if (is_missing(v)) continue;
    if (constant) {
      v = 0.0;
      continue;
    }
    auto b = static_cast<std::size_t>(std::floor((v - lo) / width));
    v = static_cast<double>(std::min(b, bins - 1));
  }
  return d.with_schema(std::move(schema), std::move(rows));
}

inline Dataset discretize_all(const Dataset& d, std::size_t bins = 10) {
  Dataset out = d;
  for (std::size_t j = 0; j < d.num_attributes(); ++j) {
    if (d.attribute(j).is_numeric()) out = discretize(out, j, bins);
  }
  return out;
}

struct FeatureScore {
  std::size_t attribute = 0;
  double score = 0.0;
  std::size_t rank = 0;

  bool operator==(const FeatureScore&) const = default;
};

enum class ScoreKind { info_gain, symmetrical_uncertainty };

/// Scores every attribute and sorts descending; equal scores keep ascending
/// attribute order.
inline std::vector<FeatureScore> rank_features(const Dataset& d,
                                               ScoreKind kind = ScoreKind::info_gain,
                                               double base = kLog2Base) {
  if (!d.all_nominal()) throw DataError("rank_features needs an all-nominal dataset");
  std::vector<FeatureScore> scores;
  for (std::size_t j = 0; j < d.num_attributes(); ++j) {
    const ContingencyTable t = contingency(d, j);
    const double s = kind == ScoreKind::info_gain ? info_gain(t, base)
                                                  : symmetrical_uncertainty(t, base);
    scores.push_back({j, s, 0});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) { return a.score > b.score; });
  for (std::size_t r = 0; r < scores.size(); ++r) scores[r].rank = r;
  return scores;
}

/// Attributes scoring strictly above the threshold, in rank order.
inline std::vector<std::size_t> select_above_threshold(std::span<const FeatureScore> scores,
                                                       double threshold) {
  std::vector<std::size_t> out;
  for (const auto& s : scores) {
    if (s.score > threshold) out.push_back(s.attribute);
  }
  if (out.empty()) {
    double top = scores.empty() ? 0.0 : scores.front().score;
    for (const auto& s : scores) top = std::max(top, s.score);
    throw DataError("no attribute scores above threshold " + std::to_string(threshold) +
                    " (best score is " + std::to_string(top) +
                    "); lower --ig-threshold or use --ig-top-k");
  }
  return out;
}

inline std::vector<std::size_t> select_top_k(std::span<const FeatureScore> scores, std::size_t k) {
  if (k == 0) throw ConfigError("top-k selection needs k >= 1");
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < scores.size() && r < k; ++r) out.push_back(scores[r].attribute);
  return out;
}

}  // namespace fsforge
