#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "fsforge/dataset.hpp"
#include "fsforge/error.hpp"

namespace fsforge {

enum class ClassifierId { naive_bayes, logistic, mlp, bf_tree, rule_learner };

inline constexpr ClassifierId kAllClassifiers[] = {ClassifierId::naive_bayes, ClassifierId::logistic,
                                                  ClassifierId::mlp, ClassifierId::bf_tree,
                                                  ClassifierId::rule_learner};

inline std::string_view to_string(ClassifierId id) {
  switch (id) {
    case ClassifierId::naive_bayes: return "naive_bayes";
    case ClassifierId::logistic: return "logistic";
    case ClassifierId::mlp: return "mlp";
    case ClassifierId::bf_tree: return "bf_tree";
    case ClassifierId::rule_learner: return "rule_learner";
  }
  return "unknown";
}

using Distribution = std::vector<double>;

/// Common learner interface: fit on a dataset, then return a probability
/// vector over the training dataset's class domain for any instance with the
/// same schema.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ClassifierId id() const = 0;
  virtual void fit(const Dataset& d) = 0;
  virtual Distribution predict_distribution(const Instance& x) const = 0;

  bool fitted() const noexcept { return fitted_; }

  std::size_t predict(const Instance& x) const {
    Distribution p = predict_distribution(x);
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  }

 protected:
  void require_fitted() const {
    if (!fitted_) throw std::logic_error(std::string(to_string(id())) + ": predict before fit");
  }

  bool fitted_ = false;
};

// Normalizes log-scores into probabilities; -inf entries get probability 0.
inline Distribution softmax_from_log(const std::vector<double>& log_scores) {
  double top = -INFINITY;
  for (double s : log_scores) top = std::max(top, s);
  Distribution p(log_scores.size(), 0.0);
  if (!std::isfinite(top)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  double z = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    p[c] = std::isfinite(log_scores[c]) ? std::exp(log_scores[c] - top) : 0.0;
    z += p[c];
  }
  for (double& v : p) v /= z;
  return p;
}

// Laplace-smoothed frequencies: (count + 1) / (total + classes).
inline Distribution laplace_distribution(const std::vector<double>& counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  Distribution p(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    p[c] = (counts[c] + 1.0) / (total + static_cast<double>(counts.size()));
  }
  return p;
}

}  // namespace fsforge
