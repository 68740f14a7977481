#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fsforge/classifiers/classifier.hpp"
#include "fsforge/classifiers/encoding.hpp"
#include "fsforge/random.hpp"

namespace fsforge {

struct MlpParams {
  double learning_rate = 0.3;
  double momentum = 0.2;
  std::size_t epochs = 500;
  std::size_t hidden = 0;  // 0: ceil((inputs + classes) / 2)
  std::uint64_t seed = 0;
};

/// One-hidden-layer perceptron: sigmoid hidden units, softmax output,
/// backpropagation with momentum, one update per instance in data order.
///
/// Parameter vector layout: hidden weights (hidden x (inputs + 1)) followed
/// by output weights (classes x (hidden + 1)), row-major, bias last in each
/// row.
class MultilayerPerceptron final : public Classifier {
 public:
  explicit MultilayerPerceptron(MlpParams params = {}) : params_(params) {}

  ClassifierId id() const override { return ClassifierId::mlp; }

  struct Shape {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t classes = 0;

    std::size_t hidden_params() const { return hidden * (inputs + 1); }
    std::size_t size() const { return hidden_params() + classes * (hidden + 1); }
  };

  static double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

  static void forward(const std::vector<double>& theta, const Shape& s, const double* x,
                      std::vector<double>& h, std::vector<double>& z) {
    h.resize(s.hidden);
    z.resize(s.classes);
    for (std::size_t u = 0; u < s.hidden; ++u) {
      const double* w = theta.data() + u * (s.inputs + 1);
      double a = w[s.inputs];
      for (std::size_t k = 0; k < s.inputs; ++k) a += w[k] * x[k];
      h[u] = sigmoid(a);
    }
    const double* out = theta.data() + s.hidden_params();
    for (std::size_t c = 0; c < s.classes; ++c) {
      const double* w = out + c * (s.hidden + 1);
      double a = w[s.hidden];
      for (std::size_t u = 0; u < s.hidden; ++u) a += w[u] * h[u];
      z[c] = a;
    }
  }

  // Adds one instance's gradient to grad and returns its cross-entropy.
  static double accumulate(const std::vector<double>& theta, const Shape& s, const double* x, std::size_t y,
                           std::vector<double>& grad, std::vector<double>& h, std::vector<double>& z,
                           std::vector<double>& delta_h) {
    forward(theta, s, x, h, z);
    const Distribution p = softmax_from_log(z);
    delta_h.assign(s.hidden, 0.0);
    double* g_out = grad.data() + s.hidden_params();
    const double* w_out = theta.data() + s.hidden_params();
    for (std::size_t c = 0; c < s.classes; ++c) {
      const double err = p[c] - (c == y ? 1.0 : 0.0);
      double* g = g_out + c * (s.hidden + 1);
      const double* w = w_out + c * (s.hidden + 1);
      for (std::size_t u = 0; u < s.hidden; ++u) {
        g[u] += err * h[u];
        delta_h[u] += err * w[u];
      }
      g[s.hidden] += err;
    }
    for (std::size_t u = 0; u < s.hidden; ++u) {
      const double d = delta_h[u] * h[u] * (1.0 - h[u]);
      if (d == 0.0) continue;
      double* g = grad.data() + u * (s.inputs + 1);
      for (std::size_t k = 0; k < s.inputs; ++k) g[k] += d * x[k];
      g[s.inputs] += d;
    }
    return -std::log(std::max(p[y], 1e-300));
  }

  // Cross-entropy summed over the data set, and its gradient.
  static double loss_and_gradient(const std::vector<double>& theta, const Shape& s,
                                  const EncodedData& data, std::vector<double>& grad) {
    grad.assign(theta.size(), 0.0);
    std::vector<double> h, z, delta_h;
    double loss = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) loss += accumulate(theta, s, data.row(i), data.y[i], grad, h, z, delta_h);
    return loss;
  }

  static std::vector<double> initial_parameters(const Shape& s, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "mlp_init"));
    std::vector<double> theta(s.size());
    for (double& w : theta) w = rng.uniform(-0.5, 0.5);
    return theta;
  }

  void fit(const Dataset& d) override {
    if (d.empty()) throw DataError("mlp: empty training set");
    encoder_.fit(d);
    const EncodedData data = encoder_.encode(d);
    shape_.inputs = data.cols;
    shape_.classes = d.num_classes();
    shape_.hidden = params_.hidden != 0 ? params_.hidden : (data.cols + shape_.classes + 1) / 2;
    theta_ = initial_parameters(shape_, params_.seed);
    std::vector<double> velocity(theta_.size(), 0.0), grad(theta_.size()), h, z, delta_h;
    for (std::size_t epoch = 0; epoch < params_.epochs; ++epoch) {
      for (std::size_t i = 0; i < data.rows; ++i) {
        std::fill(grad.begin(), grad.end(), 0.0);
        accumulate(theta_, shape_, data.row(i), data.y[i], grad, h, z, delta_h);
        for (std::size_t k = 0; k < theta_.size(); ++k) {
          velocity[k] = params_.momentum * velocity[k] - params_.learning_rate * grad[k];
          theta_[k] += velocity[k];
        }
      }
    }
    fitted_ = true;
  }

  Distribution predict_distribution(const Instance& x) const override {
    require_fitted();
    const std::vector<double> e = encoder_.encode(x);
    std::vector<double> h, z;
    forward(theta_, shape_, e.data(), h, z);
    return softmax_from_log(z);
  }

  const Shape& shape() const noexcept { return shape_; }
  const std::vector<double>& parameters() const noexcept { return theta_; }

 private:
  MlpParams params_;
  FeatureEncoder encoder_;
  Shape shape_;
  std::vector<double> theta_;
};

}  // namespace fsforge
