#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fsforge/classifiers/factory.hpp"
#include "fsforge/dataset.hpp"
#include "fsforge/parallel.hpp"

namespace fsforge {

struct CvResult {
  // Aligned with the evaluated dataset's instance order.
  std::vector<Distribution> predictions;
  // Class frequencies of the training fold each instance was held out from.
  std::vector<Distribution> training_priors;
  std::size_t models_trained = 0;
};

inline Distribution class_frequencies(const Dataset& d) {
  Distribution p(d.num_classes(), 0.0);
  for (const auto& inst : d.instances()) p[inst.label] += 1.0;
  for (double& v : p) v /= static_cast<double>(d.size());
  return p;
}

/// For each fold, fits a fresh model on the complement and predicts the
/// held-out rows. Model seeds are derived from (seed, fold) so results do not
/// depend on how many folds run concurrently.
inline CvResult cross_validate(ClassifierId id, const Dataset& d, const FoldPlan& folds,
                               std::uint64_t seed = 0, std::size_t threads = 1) {
  if (folds.assignments.size() != d.size()) throw DataError("fold plan does not match dataset size");
  CvResult out;
  out.predictions.assign(d.size(), {});
  out.training_priors.assign(d.size(), {});
  std::vector<std::size_t> trained(folds.k, 0);
  parallel_for(folds.k, threads, [&](std::size_t fold) {
    const auto test = folds.test_rows(fold);
    if (test.empty()) return;
    const Dataset train = d.select_rows(folds.train_rows(fold));
    const auto counts = train.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) {
        throw DataError("training fold " + std::to_string(fold) + " has no instances of class '" +
                        d.class_domain()[c] + "'");
      }
    }
    auto model = make_classifier(id, derive_seed(seed, fold));
    model->fit(train);
    const Distribution prior = class_frequencies(train);
    for (std::size_t r : test) {
      out.predictions[r] = model->predict_distribution(d[r]);
      out.training_priors[r] = prior;
    }
    trained[fold] = 1;
  });
  for (std::size_t t : trained) out.models_trained += t;
  return out;
}

/// Fits on all of d and predicts d itself.
inline CvResult resubstitute(ClassifierId id, const Dataset& d, std::uint64_t seed = 0) {
  auto model = make_classifier(id, seed);
  model->fit(d);
  CvResult out;
  const Distribution prior = class_frequencies(d);
  for (const auto& inst : d.instances()) {
    out.predictions.push_back(model->predict_distribution(inst));
    out.training_priors.push_back(prior);
  }
  out.models_trained = 1;
  return out;
}

}  // namespace fsforge
