#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "fsforge/classifiers/bf_tree.hpp"
#include "fsforge/classifiers/logistic.hpp"
#include "fsforge/classifiers/mlp.hpp"
#include "fsforge/classifiers/naive_bayes.hpp"
#include "fsforge/classifiers/rule_learner.hpp"
#include "fsforge/error.hpp"

namespace fsforge {

inline std::unique_ptr<Classifier> make_classifier(ClassifierId id, std::uint64_t seed = 0) {
  switch (id) {
    case ClassifierId::naive_bayes: return std::make_unique<NaiveBayes>();
    case ClassifierId::logistic: return std::make_unique<LogisticRegression>();
    case ClassifierId::mlp: {
      MlpParams p;
      p.seed = seed;
      return std::make_unique<MultilayerPerceptron>(p);
    }
    case ClassifierId::bf_tree: return std::make_unique<BestFirstTree>();
    case ClassifierId::rule_learner: return std::make_unique<RuleLearner>(RuleLearnerParams{seed});
  }
  throw ConfigError("unknown classifier id");
}

inline ClassifierId parse_classifier_id(std::string_view name) {
  for (ClassifierId id : kAllClassifiers) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown classifier '" + std::string(name) +
                    "' (expected naive_bayes, logistic, mlp, bf_tree or rule_learner)");
}

}  // namespace fsforge
