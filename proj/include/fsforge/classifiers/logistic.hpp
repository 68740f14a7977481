#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fsforge/classifiers/classifier.hpp"
#include "fsforge/classifiers/encoding.hpp"

namespace fsforge {

struct LogisticParams {
  double ridge = 1e-8;
  double learning_rate = 0.1;
  std::size_t max_epochs = 2000;
  double gradient_tolerance = 1e-6;
};

/// Multinomial logistic regression trained by full-batch gradient descent.
///
/// Parameters are a (classes x (inputs + 1)) row-major matrix; the last
/// column of each row is the bias. The objective is the mean cross-entropy
/// plus ridge/2 times the squared norm of the non-bias weights.
class LogisticRegression final : public Classifier {
 public:
  explicit LogisticRegression(LogisticParams params = {}) : params_(params) {}

  ClassifierId id() const override { return ClassifierId::logistic; }

  static void scores(const std::vector<double>& theta, std::size_t classes, std::size_t inputs,
                     const double* x, double* out) {
    for (std::size_t c = 0; c < classes; ++c) {
      const double* w = theta.data() + c * (inputs + 1);
      double s = w[inputs];
      for (std::size_t k = 0; k < inputs; ++k) s += w[k] * x[k];
      out[c] = s;
    }
  }

  // Returns the objective and writes its gradient.
  static double loss_and_gradient(const std::vector<double>& theta, const EncodedData& data,
                                  double ridge, std::vector<double>& grad) {
    const std::size_t classes = data.classes;
    const std::size_t stride = data.cols + 1;
    grad.assign(theta.size(), 0.0);
    std::vector<double> z(classes);
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) {
      const double* x = data.row(i);
      scores(theta, classes, data.cols, x, z.data());
      Distribution p = softmax_from_log(z);
      loss -= std::log(std::max(p[data.y[i]], 1e-300)) * inv_n;
      for (std::size_t c = 0; c < classes; ++c) {
        const double err = (p[c] - (c == data.y[i] ? 1.0 : 0.0)) * inv_n;
        double* g = grad.data() + c * stride;
        for (std::size_t k = 0; k < data.cols; ++k) g[k] += err * x[k];
        g[data.cols] += err;
      }
    }
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t k = 0; k < data.cols; ++k) {
        const double w = theta[c * stride + k];
        loss += 0.5 * ridge * w * w;
        grad[c * stride + k] += ridge * w;
      }
    }
    return loss;
  }

  void fit(const Dataset& d) override {
    if (d.empty()) throw DataError("logistic: empty training set");
    encoder_.fit(d);
    const EncodedData data = encoder_.encode(d);
    classes_ = d.num_classes();
    theta_.assign(classes_ * (data.cols + 1), 0.0);
    std::vector<double> grad;
    epochs_run_ = 0;
    for (std::size_t epoch = 0; epoch < params_.max_epochs; ++epoch) {
      loss_and_gradient(theta_, data, params_.ridge, grad);
      double norm = 0.0;
      for (double g : grad) norm += g * g;
      if (std::sqrt(norm) < params_.gradient_tolerance) break;
      for (std::size_t k = 0; k < theta_.size(); ++k) theta_[k] -= params_.learning_rate * grad[k];
      ++epochs_run_;
    }
    fitted_ = true;
  }

  // Uninitialized-weights view used by tests: all-zero parameters.
  void reset_to_zero(const Dataset& d) {
    encoder_.fit(d);
    classes_ = d.num_classes();
    theta_.assign(classes_ * (encoder_.width() + 1), 0.0);
    fitted_ = true;
  }

  Distribution predict_distribution(const Instance& x) const override {
    require_fitted();
    const std::vector<double> e = encoder_.encode(x);
    std::vector<double> z(classes_);
    scores(theta_, classes_, e.size(), e.data(), z.data());
    return softmax_from_log(z);
  }

  const std::vector<double>& parameters() const noexcept { return theta_; }
  std::size_t epochs_run() const noexcept { return epochs_run_; }

 private:
  LogisticParams params_;
  FeatureEncoder encoder_;
  std::size_t classes_ = 0;
  std::vector<double> theta_;
  std::size_t epochs_run_ = 0;
};

}  // namespace fsforge
