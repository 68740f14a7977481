#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fsforge/classifiers/classifier.hpp"

namespace fsforge {

/// Naive Bayes with Laplace add-one nominal likelihoods and per-class
/// Gaussian numeric likelihoods. Priors are maximum-likelihood, so a class
/// absent from training gets probability zero.
class NaiveBayes final : public Classifier {
 public:
  static constexpr double kVarianceFloor = 1e-6;

  ClassifierId id() const override { return ClassifierId::naive_bayes; }

  void fit(const Dataset& d) override {
    if (d.empty()) throw DataError("naive_bayes: empty training set");
    schema_ = d.schema();
    const std::size_t n_classes = d.num_classes();
    class_counts_.assign(n_classes, 0.0);
    for (const auto& inst : d.instances()) class_counts_[inst.label] += 1.0;
    n_ = static_cast<double>(d.size());

    log_likelihood_.assign(schema_.size(), {});
    mean_.assign(schema_.size(), std::vector<double>(n_classes, 0.0));
    variance_.assign(schema_.size(), std::vector<double>(n_classes, kVarianceFloor));
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      if (schema_[j].is_nominal()) {
        const std::size_t arity = schema_[j].arity();
        std::vector<std::vector<double>> counts(n_classes, std::vector<double>(arity, 0.0));
        std::vector<double> seen(n_classes, 0.0);
        for (const auto& inst : d.instances()) {
          if (is_missing(inst.values[j])) continue;
          counts[inst.label][nominal_index(inst.values[j])] += 1.0;
          seen[inst.label] += 1.0;
        }
        auto& table = log_likelihood_[j];
        table.assign(n_classes, std::vector<double>(arity, 0.0));
        for (std::size_t c = 0; c < n_classes; ++c) {
          for (std::size_t v = 0; v < arity; ++v) {
            table[c][v] = std::log((counts[c][v] + 1.0) / (seen[c] + static_cast<double>(arity)));
          }
        }
      } else {
        std::vector<double> sum(n_classes, 0.0), sq(n_classes, 0.0), cnt(n_classes, 0.0);
        for (const auto& inst : d.instances()) {
          const double v = inst.values[j];
          if (is_missing(v)) continue;
          sum[inst.label] += v;
          cnt[inst.label] += 1.0;
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
          if (cnt[c] > 0) mean_[j][c] = sum[c] / cnt[c];
        }
        for (const auto& inst : d.instances()) {
          const double v = inst.values[j];
          if (is_missing(v)) continue;
          const double dv = v - mean_[j][inst.label];
          sq[inst.label] += dv * dv;
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
          if (cnt[c] > 0) variance_[j][c] = std::max(kVarianceFloor, sq[c] / cnt[c]);
        }
      }
    }
    fitted_ = true;
  }

  Distribution predict_distribution(const Instance& x) const override {
    require_fitted();
    const std::size_t n_classes = class_counts_.size();
    std::vector<double> score(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (class_counts_[c] == 0.0) {
        score[c] = -INFINITY;
        continue;
      }
      double s = std::log(class_counts_[c] / n_);
      for (std::size_t j = 0; j < schema_.size(); ++j) {
        const double v = x.values[j];
        if (is_missing(v)) continue;
        if (schema_[j].is_nominal()) {
          s += log_likelihood_[j][c][nominal_index(v)];
        } else {
          const double var = variance_[j][c];
          const double dv = v - mean_[j][c];
          s += -0.5 * std::log(2.0 * M_PI * var) - dv * dv / (2.0 * var);
        }
      }
      score[c] = s;
    }
    return softmax_from_log(score);
  }

 private:
  std::vector<AttributeSpec> schema_;
  std::vector<double> class_counts_;
  double n_ = 0.0;
  std::vector<std::vector<std::vector<double>>> log_likelihood_;  // [attr][class][value]
  std::vector<std::vector<double>> mean_;                         // [attr][class]
  std::vector<std::vector<double>> variance_;
};

}  // namespace fsforge
