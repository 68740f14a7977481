#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fsforge/classifiers/classifier.hpp"
#include "fsforge/dataset.hpp"
#include "fsforge/error.hpp"

namespace fsforge {

// Highest probability; the lowest class index wins ties.
inline std::size_t argmax(const Distribution& p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

inline void check_aligned(std::span<const Distribution> predictions, const Dataset& d) {
  if (predictions.size() != d.size()) {
    throw DataError("prediction count " + std::to_string(predictions.size()) +
                    " does not match instance count " + std::to_string(d.size()));
  }
}

inline std::size_t misclassified_count(std::span<const Distribution> predictions, const Dataset& d) {
  check_aligned(predictions, d);
  std::size_t ms = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ms += argmax(predictions[i]) != d[i].label ? 1 : 0;
  return ms;
}

inline double mean_of(std::span<const double> xs, const char* what) {
  if (xs.empty()) throw DataError(std::string(what) + " of an empty sequence");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Mean misclassified count over a group of classifiers.
inline double ams(std::span<const double> ms_values) { return mean_of(ms_values, "AMS"); }

inline double ams(const std::vector<std::size_t>& ms_values) {
  std::vector<double> v(ms_values.begin(), ms_values.end());
  return ams(v);
}

// Mean relative absolute error (percent) over a group of classifiers.
inline double arae(std::span<const double> rae_values) { return mean_of(rae_values, "ARAE"); }

/// 100 * sum|p - truth| / sum|prior - truth| over all instances and classes,
/// truth being one-hot. `priors` holds one baseline distribution per instance
/// (the training-fold class frequencies under cross-validation).
inline double relative_absolute_error(std::span<const Distribution> predictions, const Dataset& d,
                                      std::span<const Distribution> priors) {
  check_aligned(predictions, d);
  if (priors.size() != d.size()) throw DataError("baseline prior count does not match instance count");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t c = 0; c < d.num_classes(); ++c) {
      const double truth = c == d[i].label ? 1.0 : 0.0;
      num += std::abs(predictions[i][c] - truth);
      den += std::abs(priors[i][c] - truth);
    }
  }
  if (den <= 0.0) throw DataError("relative absolute error undefined: baseline makes no error");
  return 100.0 * num / den;
}

inline double relative_absolute_error(std::span<const Distribution> predictions, const Dataset& d,
                                      const Distribution& prior) {
  std::vector<Distribution> priors(d.size(), prior);
  return relative_absolute_error(predictions, d, priors);
}

struct ConfusionSummary {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
};

struct ClassRates {
  double tp_rate = 0.0, tn_rate = 0.0, fp_rate = 0.0, fn_rate = 0.0;
  // Set when tp+fn or tn+fp is zero and the affected rates were defaulted to 0.
  bool zero_denominator = false;
};

struct RateSummary {
  std::vector<ConfusionSummary> confusion;  // per class
  std::vector<ClassRates> per_class;
  ClassRates macro;
  ClassRates micro;
};

inline ClassRates rates_from(const ConfusionSummary& s) {
  ClassRates r;
  const double pos = static_cast<double>(s.tp + s.fn);
  const double neg = static_cast<double>(s.tn + s.fp);
  if (pos > 0) {
    r.tp_rate = static_cast<double>(s.tp) / pos;
    r.fn_rate = static_cast<double>(s.fn) / pos;
  } else {
    r.zero_denominator = true;
  }
  if (neg > 0) {
    r.tn_rate = static_cast<double>(s.tn) / neg;
    r.fp_rate = static_cast<double>(s.fp) / neg;
  } else {
    r.zero_denominator = true;
  }
  return r;
}

// One-vs-rest counts from a confusion matrix indexed [actual][predicted].
inline std::vector<ConfusionSummary> one_vs_rest(const std::vector<std::vector<std::size_t>>& matrix) {
  const std::size_t k = matrix.size();
  std::size_t total = 0;
  for (const auto& row : matrix) total += std::accumulate(row.begin(), row.end(), std::size_t{0});
  std::vector<ConfusionSummary> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t actual = 0, predicted = 0;
    for (std::size_t j = 0; j < k; ++j) {
      actual += matrix[c][j];
      predicted += matrix[j][c];
    }
    out[c].tp = matrix[c][c];
    out[c].fn = actual - matrix[c][c];
    out[c].fp = predicted - matrix[c][c];
    out[c].tn = total - out[c].tp - out[c].fn - out[c].fp;
  }
  return out;
}

inline RateSummary rates_from_matrix(const std::vector<std::vector<std::size_t>>& matrix) {
  RateSummary s;
  s.confusion = one_vs_rest(matrix);
  ConfusionSummary pooled;
  for (const auto& c : s.confusion) {
    s.per_class.push_back(rates_from(c));
    pooled.tp += c.tp;
    pooled.tn += c.tn;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
  }
  const double k = static_cast<double>(s.per_class.size());
  for (const auto& r : s.per_class) {
    s.macro.tp_rate += r.tp_rate / k;
    s.macro.tn_rate += r.tn_rate / k;
    s.macro.fp_rate += r.fp_rate / k;
    s.macro.fn_rate += r.fn_rate / k;
    s.macro.zero_denominator = s.macro.zero_denominator || r.zero_denominator;
  }
  s.micro = rates_from(pooled);
  return s;
}

inline std::vector<std::vector<std::size_t>> confusion_matrix(std::span<const Distribution> predictions,
                                                              const Dataset& d) {
  check_aligned(predictions, d);
  std::vector<std::vector<std::size_t>> m(d.num_classes(), std::vector<std::size_t>(d.num_classes(), 0));
  for (std::size_t i = 0; i < d.size(); ++i) ++m[d[i].label][argmax(predictions[i])];
  return m;
}

inline RateSummary class_rates(std::span<const Distribution> predictions, const Dataset& d) {
  return rates_from_matrix(confusion_matrix(predictions, d));
}

struct GroupRates {
  double atp_rate = 0.0, atn_rate = 0.0, afp_rate = 0.0, afn_rate = 0.0;
};

inline GroupRates group_rates(std::span<const ClassRates> per_classifier) {
  if (per_classifier.empty()) throw DataError("group rates of an empty classifier group");
  GroupRates g;
  const double n = static_cast<double>(per_classifier.size());
  for (const auto& r : per_classifier) {
    g.atp_rate += r.tp_rate;
    g.atn_rate += r.tn_rate;
    g.afp_rate += r.fp_rate;
    g.afn_rate += r.fn_rate;
  }
  g.atp_rate /= n;
  g.atn_rate /= n;
  g.afp_rate /= n;
  g.afn_rate /= n;
  return g;
}

}  // namespace fsforge
