#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fsforge/classifiers/naive_bayes.hpp"
#include "fsforge/dataset.hpp"
#include "fsforge/error.hpp"
#include "fsforge/random.hpp"
#include "fsforge/run_log.hpp"

namespace fsforge {

enum class SmotePolicy { balance_to_majority, explicit_percentage };

// integer_replication: percentages must be multiples of 100 (n/100 synthetics
// per member). fractional: any non-negative percentage, rounded to the nearest count.
enum class PercentageConvention { integer_replication, fractional };

struct SmoteParams {
  std::size_t k_neighbors = 5;
  SmotePolicy policy = SmotePolicy::balance_to_majority;
  std::map<std::string, double> percentages;  // class symbol -> percent, explicit policy only
  PercentageConvention convention = PercentageConvention::fractional;
  std::uint64_t seed = 0;

  void validate() const {
    if (k_neighbors < 1) throw ConfigError("SMOTE k_neighbors must be at least 1");
    for (const auto& [cls, pct] : percentages) {
      if (!(pct >= 0)) throw ConfigError("SMOTE percentage for '" + cls + "' must be non-negative");
      if (convention == PercentageConvention::integer_replication && std::fmod(pct, 100.0) != 0.0) {
        throw ConfigError("SMOTE percentage for '" + cls + "' must be a multiple of 100");
      }
    }
  }
};

/// Squared mixed distance: min-max normalized squared differences on numeric
/// attributes plus 0/1 mismatches on nominal ones. A missing cell counts as
/// the maximum difference of 1.
class MixedDistance {
 public:
  explicit MixedDistance(const Dataset& d) : schema_(&d.schema()) {
    lo_.assign(d.num_attributes(), INFINITY);
    hi_.assign(d.num_attributes(), -INFINITY);
    for (const auto& inst : d.instances()) {
      for (std::size_t j = 0; j < d.num_attributes(); ++j) {
        const double v = inst.values[j];
        if (is_missing(v) || d.attribute(j).is_nominal()) continue;
        lo_[j] = std::min(lo_[j], v);
        hi_[j] = std::max(hi_[j], v);
      }
    }
  }

  double squared(const Instance& a, const Instance& b) const {
    double s = 0.0;
    for (std::size_t j = 0; j < schema_->size(); ++j) {
      const double x = a.values[j];
      const double y = b.values[j];
      if (is_missing(x) || is_missing(y)) {
        s += 1.0;
      } else if ((*schema_)[j].is_nominal()) {
        s += x == y ? 0.0 : 1.0;
      } else {
        const double range = hi_[j] - lo_[j];
        const double diff = range > 0 ? (x - y) / range : 0.0;
        s += diff * diff;
      }
    }
    return s;
  }

 private:
  const std::vector<AttributeSpec>* schema_;
  std::vector<double> lo_, hi_;
};

/// The k closest same-class instances to d[index], excluding itself; ties go
/// to the lower index. Returns every candidate when fewer than k exist.
inline std::vector<std::size_t> nearest_same_class_neighbors(const Dataset& d, std::size_t index,
                                                             std::size_t k,
                                                             const MixedDistance& dist) {
  const std::size_t label = d[index].label;
  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i != index && d[i].label == label) cand.emplace_back(dist.squared(d[index], d[i]), i);
  }
  if (cand.empty()) {
    throw DataError("class '" + d.class_domain()[label] + "' has a single member; SMOTE needs two");
  }
  const std::size_t take = std::min(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end());
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < take; ++r) out.push_back(cand[r].second);
  return out;
}

inline std::vector<std::size_t> nearest_same_class_neighbors(const Dataset& d, std::size_t index,
                                                             std::size_t k) {
  return nearest_same_class_neighbors(d, index, k, MixedDistance(d));
}

// One synthetic instance together with the pair and gap that produced it.
struct SyntheticSample {
  Instance instance;
  std::size_t base = 0;
  std::size_t neighbor = 0;
  double gap = 0.0;
};

/// Builds one synthetic instance from member x, chosen neighbor n and gap u:
/// numeric cells are x + u*(n - x), nominal cells take the majority value
/// among x's neighbors (x's own value wins a tie it is part of, otherwise the
/// lowest domain index).
inline Instance synthesize(const Dataset& d, std::size_t x, std::size_t n,
                           std::span<const std::size_t> neighbors, double u) {
  Instance syn{std::vector<double>(d.num_attributes()), d[x].label, Origin::synthetic};
  for (std::size_t j = 0; j < d.num_attributes(); ++j) {
    const double xv = d[x].values[j];
    if (d.attribute(j).is_numeric()) {
      const double nv = d[n].values[j];
      syn.values[j] = (is_missing(xv) || is_missing(nv)) ? xv : xv + u * (nv - xv);
      continue;
    }
    std::vector<std::size_t> votes(d.attribute(j).arity(), 0);
    for (std::size_t nb : neighbors) {
      if (!is_missing(d[nb].values[j])) ++votes[nominal_index(d[nb].values[j])];
    }
    const std::size_t top = *std::max_element(votes.begin(), votes.end());
    if (top == 0) {
      syn.values[j] = xv;
    } else if (!is_missing(xv) && votes[nominal_index(xv)] == top) {
      syn.values[j] = xv;
    } else {
      syn.values[j] = static_cast<double>(std::find(votes.begin(), votes.end(), top) - votes.begin());
    }
  }
  return syn;
}

/// Synthesizes n instances of `label` (class index). Each picks a random member
/// x, a random one of its k nearest same-class neighbors and one gap
/// u ~ U[0,1], then calls synthesize.
inline std::vector<SyntheticSample> smote_class_traced(const Dataset& d, std::size_t label,
                                                       std::size_t n_synthetic,
                                                       const SmoteParams& params) {
  params.validate();
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].label == label) members.push_back(i);
  }
  if (members.size() < 2) {
    throw DataError("class '" + d.class_domain().at(label) + "' has " +
                    std::to_string(members.size()) + " member(s); SMOTE needs two");
  }
  const MixedDistance dist(d);
  std::map<std::size_t, std::vector<std::size_t>> neighbor_cache;
  Rng rng(derive_seed(params.seed, std::uint64_t{label}));
  std::vector<SyntheticSample> out;
  out.reserve(n_synthetic);
  for (std::size_t s = 0; s < n_synthetic; ++s) {
    const std::size_t x = members[rng.index(members.size())];
    auto it = neighbor_cache.find(x);
    if (it == neighbor_cache.end()) {
      it = neighbor_cache.emplace(x, nearest_same_class_neighbors(d, x, params.k_neighbors, dist)).first;
    }
    const auto& nbrs = it->second;
    const std::size_t n = nbrs[rng.index(nbrs.size())];
    const double u = rng.uniform();
    out.push_back({synthesize(d, x, n, nbrs, u), x, n, u});
  }
  return out;
}

inline std::vector<Instance> smote_class(const Dataset& d, std::size_t label, std::size_t n_synthetic,
                                         const SmoteParams& params) {
  std::vector<Instance> out;
  for (auto& s : smote_class_traced(d, label, n_synthetic, params)) out.push_back(std::move(s.instance));
  return out;
}

inline std::vector<Instance> smote_class(const Dataset& d, const std::string& symbol,
                                         std::size_t n_synthetic, const SmoteParams& params) {
  return smote_class(d, d.class_index(symbol), n_synthetic, params);
}

// Synthetic count per class under the configured policy.
inline std::vector<std::size_t> smote_targets(const Dataset& d, const SmoteParams& params) {
  const auto counts = d.class_counts();
  std::vector<std::size_t> need(counts.size(), 0);
  if (params.policy == SmotePolicy::balance_to_majority) {
    const std::size_t majority = *std::max_element(counts.begin(), counts.end());
    for (std::size_t c = 0; c < counts.size(); ++c) need[c] = majority - counts[c];
  } else {
    for (const auto& [symbol, pct] : params.percentages) {
      const std::size_t c = d.class_index(symbol);
      need[c] = static_cast<std::size_t>(std::llround(static_cast<double>(counts[c]) * pct / 100.0));
    }
  }
  return need;
}

/// Oversamples every class below its target. Output is the original
/// instances followed by the synthetics, grouped by class index. Classes with
/// fewer than two members are skipped with a warning.
inline Dataset balance_dataset(const Dataset& d, const SmoteParams& params, RunLog* log = nullptr) {
  params.validate();
  const auto counts = d.class_counts();
  std::size_t present = 0;
  for (std::size_t c : counts) present += c > 0 ? 1 : 0;
  if (present < 2) throw DataError("SMOTE balancing needs at least two classes present");
  const auto need = smote_targets(d, params);
  std::vector<Instance> rows = d.instances();
  std::size_t generated = 0;
  for (std::size_t c = 0; c < need.size(); ++c) {
    if (need[c] == 0) continue;
    if (counts[c] < 2) {
      log_warn(log, "smote: class '" + d.class_domain()[c] + "' has " + std::to_string(counts[c]) +
                        " member(s); skipped");
      continue;
    }
    auto syn = smote_class(d, c, need[c], params);
    generated += syn.size();
    rows.insert(rows.end(), std::make_move_iterator(syn.begin()), std::make_move_iterator(syn.end()));
  }
  log_info(log, "smote: generated " + std::to_string(generated) + " synthetic instances");
  return d.with_instances(std::move(rows));
}

enum class FilterScope { synthetic_only, all };

/// Fits Naive Bayes on all of d and drops every in-scope instance it
/// misclassifies.
inline Dataset misclassification_filter(const Dataset& d, FilterScope scope = FilterScope::synthetic_only,
                                        RunLog* log = nullptr) {
  if (d.empty()) throw DataError("misclassification filter on an empty dataset");
  const bool any_in_scope =
      scope == FilterScope::all ||
      std::any_of(d.instances().begin(), d.instances().end(),
                  [](const Instance& i) { return i.is_synthetic(); });
  if (!any_in_scope) return d;
  NaiveBayes nb;
  nb.fit(d);
  std::vector<Instance> kept;
  std::size_t removed = 0;
  for (const auto& inst : d.instances()) {
    const bool in_scope = scope == FilterScope::all || inst.is_synthetic();
    if (in_scope && nb.predict(inst) != inst.label) {
      ++removed;
      continue;
    }
    kept.push_back(inst);
  }
  Dataset out = d.with_instances(std::move(kept));
  if (scope == FilterScope::all) {
    const auto before = d.class_counts();
    const auto after = out.class_counts();
    for (std::size_t c = 0; c < before.size(); ++c) {
      if (before[c] > 0 && after[c] == 0) {
        throw DataError("misclassification filter removed every instance of class '" +
                        d.class_domain()[c] + "'");
      }
    }
  }
  log_info(log, "filter: removed " + std::to_string(removed) + " misclassified instances");
  return out;
}

/// Every original instance, then the synthetic instances of `filtered`.
inline Dataset merge_with_original(const Dataset& original, const Dataset& filtered) {
  if (original.schema() != filtered.schema() || original.class_domain() != filtered.class_domain()) {
    throw DataError("cannot merge datasets with different schemas");
  }
  std::vector<Instance> rows = original.instances();
  for (const auto& inst : filtered.instances()) {
    if (inst.is_synthetic()) rows.push_back(inst);
  }
  return original.with_instances(std::move(rows));
}

}  // namespace fsforge
