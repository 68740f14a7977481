#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fsforge/fsforge.hpp"

namespace fsforge {

namespace detail {

inline Dataset selftest_fixture(std::uint64_t seed, std::size_t n = 60) {
  Rng rng(seed);
  std::vector<AttributeSpec> schema = {AttributeSpec::make_nominal("a", {"0", "1", "2"}),
                                       AttributeSpec::make_nominal("b", {"0", "1"}),
                                       AttributeSpec::make_numeric("c")};
  std::vector<Instance> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label = i % 3 == 0 ? 1 : 0;
    rows.push_back({{static_cast<double>(rng.index(3)), static_cast<double>(label ^ (rng.bernoulli(0.1) ? 1 : 0)),
                     rng.uniform(0, 10) + 3.0 * static_cast<double>(label)},
                    label,
                    Origin::original});
  }
  return Dataset("selftest", schema, {"neg", "pos"}, rows);
}

}  // namespace detail

/// Quick invariant sweep over generated fixtures. Prints one line per check
/// and returns true when all pass.
inline bool run_selftest(std::ostream& out) {
  struct Check {
    const char* name;
    std::function<bool()> run;
  };
  const std::vector<Check> checks = {
      {"information gain is symmetric",
       [] {
         Rng rng(1);
         for (int t = 0; t < 200; ++t) {
           ContingencyTable table(2 + rng.index(4), std::vector<double>(2 + rng.index(4)));
           for (auto& row : table) {
             for (auto& c : row) c = static_cast<double>(rng.index(20));
           }
           if (std::abs(info_gain(table) - info_gain(transpose(table))) > 1e-9) return false;
         }
         return true;
       }},
      {"rate complements hold",
       [] {
         Rng rng(2);
         for (int t = 0; t < 200; ++t) {
           const std::size_t k = 2 + rng.index(4);
           std::vector<std::vector<std::size_t>> m(k, std::vector<std::size_t>(k));
           for (auto& row : m) {
             for (auto& c : row) c = 1 + rng.index(10);
           }
           for (const auto& r : rates_from_matrix(m).per_class) {
             if (std::abs(r.tp_rate + r.fn_rate - 1) > 1e-12 || std::abs(r.fp_rate + r.tn_rate - 1) > 1e-12) {
               return false;
             }
           }
         }
         return true;
       }},
      {"SMOTE samples are convex and balanced",
       [] {
         const Dataset d = detail::selftest_fixture(3);
         SmoteParams p;
         p.seed = 3;
         const auto counts = d.class_counts();
         for (const auto& s : smote_class_traced(d, 1, counts[0] - counts[1], p)) {
           const double lo = std::min(d[s.base].values[2], d[s.neighbor].values[2]);
           const double hi = std::max(d[s.base].values[2], d[s.neighbor].values[2]);
           if (s.instance.values[2] < lo || s.instance.values[2] > hi) return false;
         }
         const auto balanced = balance_dataset(d, p).class_counts();
         return balanced[0] == balanced[1];
       }},
      {"stratified folds are balanced",
       [] {
         const Dataset d = detail::selftest_fixture(4, 47);
         const FoldPlan plan = stratified_folds(d, 10, 4);
         for (std::size_t c = 0; c < d.num_classes(); ++c) {
           std::vector<std::size_t> per(plan.k, 0);
           for (std::size_t i = 0; i < d.size(); ++i) {
             if (d[i].label == c) ++per[plan.assignments[i]];
           }
           if (*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) > 1) {
             return false;
           }
         }
         return true;
       }},
      {"classifiers emit probability vectors",
       [] {
         const Dataset d = detail::selftest_fixture(5, 30);
         for (ClassifierId id : kAllClassifiers) {
           auto model = make_classifier(id, 5);
           model->fit(d);
           for (const auto& inst : d.instances()) {
             const auto p = model->predict_distribution(inst);
             double s = 0;
             for (double v : p) {
               if (v < 0) return false;
               s += v;
             }
             if (std::abs(s - 1) > 1e-9) return false;
           }
         }
         return true;
       }},
      {"GA best-ever fitness is monotone and within budget",
       [] {
         const Dataset d = detail::selftest_fixture(6);
         const FoldPlan folds = stratified_folds(d, 5, 6);
         GaParams p;
         p.seed = 6;
         p.max_generations = 5;
         const GaResult r = evolve({0, 1, 2}, d, folds, p);
         for (std::size_t g = 1; g < r.trace.size(); ++g) {
           if (r.trace[g].best_ever < r.trace[g - 1].best_ever) return false;
         }
         return r.evaluations <= p.population_size * (p.max_generations + 1);
       }},
      {"report group values match their rows",
       [] {
         const Dataset d = detail::selftest_fixture(7, 40);
         PipelineConfig cfg;
         cfg.method = Method::all_features;
         cfg.outer_folds = 4;
         const MethodRun run = run_method(d, cfg);
         double ms = 0, rae = 0;
         for (const auto& c : run.report.classifiers) {
           ms += static_cast<double>(c.ms);
           rae += c.rae;
         }
         const double n = static_cast<double>(run.report.classifiers.size());
         return ms / n == run.report.group.ams && rae / n == run.report.group.arae;
       }},
  };
  bool ok = true;
  for (const auto& check : checks) {
    bool pass = false;
    try {
      pass = check.run();
    } catch (const std::exception& e) {
      out << "  error: " << e.what() << '\n';
    }
    out << (pass ? "PASS  " : "FAIL  ") << check.name << '\n';
    ok = ok && pass;
  }
  return ok;
}

}  // namespace fsforge
