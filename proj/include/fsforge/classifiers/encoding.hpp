#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fsforge/dataset.hpp"

namespace fsforge {

// Dense design matrix (row-major) with integer labels.
struct EncodedData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t classes = 0;
  std::vector<double> x;
  std::vector<std::size_t> y;

  const double* row(std::size_t i) const { return x.data() + i * cols; }
};

/// Maps instances to real vectors: nominal attributes one-hot, numeric
/// attributes standardized with the training mean and deviation.
class FeatureEncoder {
 public:
  void fit(const Dataset& d) {
    schema_ = d.schema();
    offset_.clear();
    mean_.assign(schema_.size(), 0.0);
    scale_.assign(schema_.size(), 1.0);
    width_ = 0;
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      offset_.push_back(width_);
      width_ += schema_[j].is_nominal() ? schema_[j].arity() : 1;
      if (schema_[j].is_numeric()) {
        double sum = 0, sq = 0, n = 0;
        for (const auto& inst : d.instances()) {
          if (is_missing(inst.values[j])) continue;
          sum += inst.values[j];
          n += 1;
        }
        if (n > 0) mean_[j] = sum / n;
        for (const auto& inst : d.instances()) {
          if (is_missing(inst.values[j])) continue;
          sq += (inst.values[j] - mean_[j]) * (inst.values[j] - mean_[j]);
        }
        const double sd = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
        scale_[j] = sd > 0 ? sd : 1.0;
      }
    }
  }

  std::size_t width() const noexcept { return width_; }

  void encode(const Instance& inst, double* out) const {
    std::fill(out, out + width_, 0.0);
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      const double v = inst.values[j];
      if (is_missing(v)) continue;
      if (schema_[j].is_nominal()) {
        out[offset_[j] + nominal_index(v)] = 1.0;
      } else {
        out[offset_[j]] = (v - mean_[j]) / scale_[j];
      }
    }
  }

  std::vector<double> encode(const Instance& inst) const {
    std::vector<double> out(width_);
    encode(inst, out.data());
    return out;
  }

  EncodedData encode(const Dataset& d) const {
    EncodedData e{d.size(), width_, d.num_classes(), std::vector<double>(d.size() * width_), {}};
    for (std::size_t i = 0; i < d.size(); ++i) {
      encode(d[i], e.x.data() + i * width_);
      e.y.push_back(d[i].label);
    }
    return e;
  }

 private:
  std::vector<AttributeSpec> schema_;
  std::vector<std::size_t> offset_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::size_t width_ = 0;
};

}  // namespace fsforge
