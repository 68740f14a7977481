#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fsforge/error.hpp"
#include "fsforge/random.hpp"

namespace fsforge {

// Cells are stored as doubles: a nominal cell holds its value-domain index,
// a numeric cell holds its value, and a missing cell is a quiet NaN.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double cell) noexcept { return std::isnan(cell); }

inline std::size_t nominal_index(double cell) noexcept { return static_cast<std::size_t>(cell); }

enum class AttributeKind { nominal, numeric };

struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::nominal;
  std::vector<std::string> values;  // value domain, nominal only

  static AttributeSpec make_nominal(std::string name, std::vector<std::string> values) {
    return {std::move(name), AttributeKind::nominal, std::move(values)};
  }
  static AttributeSpec make_numeric(std::string name) {
    return {std::move(name), AttributeKind::numeric, {}};
  }

  bool is_nominal() const noexcept { return kind == AttributeKind::nominal; }
  bool is_numeric() const noexcept { return kind == AttributeKind::numeric; }
  std::size_t arity() const noexcept { return values.size(); }

  bool operator==(const AttributeSpec&) const = default;
};

enum class Origin : std::uint8_t { original, synthetic };

struct Instance {
  std::vector<double> values;
  std::size_t label = 0;  // index into Dataset::class_domain()
  Origin origin = Origin::original;

  bool is_synthetic() const noexcept { return origin == Origin::synthetic; }

  // NaN-aware: two missing cells compare equal.
  bool operator==(const Instance& other) const {
    if (label != other.label || origin != other.origin || values.size() != other.values.size()) {
      return false;
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double a = values[j];
      const double b = other.values[j];
      if (is_missing(a) != is_missing(b)) return false;
      if (!is_missing(a) && a != b) return false;
    }
    return true;
  }
};

/// Immutable table of labelled instances over a fixed attribute schema.
///
/// The constructor validates every invariant (unique attribute names,
/// non-empty duplicate-free nominal domains, at least two classes, cell
/// arity and nominal bounds, label bounds) and throws DataError otherwise.
/// All transformations return new datasets.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::string relation, std::vector<AttributeSpec> schema,
          std::vector<std::string> class_domain, std::vector<Instance> instances,
          std::string class_name = "class")
      : relation_(std::move(relation)),
        class_name_(std::move(class_name)),
        schema_(std::move(schema)),
        class_domain_(std::move(class_domain)),
        instances_(std::move(instances)) {
    validate();
  }

  const std::string& relation() const noexcept { return relation_; }
  const std::string& class_name() const noexcept { return class_name_; }
  const std::vector<AttributeSpec>& schema() const noexcept { return schema_; }
  const AttributeSpec& attribute(std::size_t j) const { return schema_.at(j); }
  const std::vector<std::string>& class_domain() const noexcept { return class_domain_; }
  const std::vector<Instance>& instances() const noexcept { return instances_; }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }

  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }
  std::size_t num_attributes() const noexcept { return schema_.size(); }
  std::size_t num_classes() const noexcept { return class_domain_.size(); }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(num_classes(), 0);
    for (const auto& inst : instances_) ++counts[inst.label];
    return counts;
  }

  std::size_t count_missing() const {
    std::size_t n = 0;
    for (const auto& inst : instances_) {
      n += static_cast<std::size_t>(std::count_if(inst.values.begin(), inst.values.end(),
                                                  [](double v) { return is_missing(v); }));
    }
    return n;
  }

  bool all_nominal() const {
    return std::all_of(schema_.begin(), schema_.end(),
                       [](const AttributeSpec& a) { return a.is_nominal(); });
  }

  std::size_t class_index(const std::string& symbol) const {
    auto it = std::find(class_domain_.begin(), class_domain_.end(), symbol);
    if (it == class_domain_.end()) throw DataError("unknown class symbol '" + symbol + "'");
    return static_cast<std::size_t>(it - class_domain_.begin());
  }

  // Same schema, different rows.
  Dataset with_instances(std::vector<Instance> instances) const {
    return Dataset(relation_, schema_, class_domain_, std::move(instances), class_name_);
  }

  Dataset with_schema(std::vector<AttributeSpec> schema, std::vector<Instance> instances) const {
    return Dataset(relation_, std::move(schema), class_domain_, std::move(instances), class_name_);
  }

  Dataset select_rows(std::span<const std::size_t> rows) const {
    std::vector<Instance> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(instances_.at(r));
    return with_instances(std::move(out));
  }

  /// Keeps only the listed attributes, in the listed order. This is the only
  /// feature-masking mechanism: learners never see a mask, only a projection.
  Dataset project(std::span<const std::size_t> attributes) const {
    std::vector<AttributeSpec> schema;
    schema.reserve(attributes.size());
    for (std::size_t j : attributes) schema.push_back(schema_.at(j));
    std::vector<Instance> rows;
    rows.reserve(instances_.size());
    for (const auto& inst : instances_) {
      Instance p{{}, inst.label, inst.origin};
      p.values.reserve(attributes.size());
      for (std::size_t j : attributes) p.values.push_back(inst.values[j]);
      rows.push_back(std::move(p));
    }
    return with_schema(std::move(schema), std::move(rows));
  }

  bool operator==(const Dataset& other) const {
    return schema_ == other.schema_ && class_domain_ == other.class_domain_ &&
           instances_ == other.instances_;
  }

 private:
  void validate() const {
    if (class_domain_.size() < 2) throw DataError("class domain needs at least 2 symbols");
    check_unique(class_domain_, "class symbol");
    std::set<std::string> names;
    for (const auto& a : schema_) {
      if (!names.insert(a.name).second) throw DataError("duplicate attribute name '" + a.name + "'");
      if (a.is_nominal()) {
        if (a.values.empty()) throw DataError("nominal attribute '" + a.name + "' has empty domain");
        check_unique(a.values, "value of attribute '" + a.name + "'");
      }
    }
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      const auto& inst = instances_[i];
      if (inst.values.size() != schema_.size()) {
        throw DataError("instance " + std::to_string(i) + " has " +
                        std::to_string(inst.values.size()) + " cells, schema has " +
                        std::to_string(schema_.size()));
      }
      if (inst.label >= class_domain_.size()) {
        throw DataError("instance " + std::to_string(i) + " has out-of-range label");
      }
      for (std::size_t j = 0; j < schema_.size(); ++j) {
        const double v = inst.values[j];
        if (is_missing(v) || schema_[j].is_numeric()) continue;
        if (v < 0 || v != std::floor(v) || nominal_index(v) >= schema_[j].arity()) {
          throw DataError("instance " + std::to_string(i) + " attribute '" + schema_[j].name +
                          "' holds an index outside its value domain");
        }
      }
    }
  }

  static void check_unique(const std::vector<std::string>& xs, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& x : xs) {
      if (!seen.insert(x).second) throw DataError("duplicate " + what + " '" + x + "'");
    }
  }

  std::string relation_;
  std::string class_name_ = "class";
  std::vector<AttributeSpec> schema_;
  std::vector<std::string> class_domain_;
  std::vector<Instance> instances_;
};

/// Replaces missing cells with the per-class mode (nominal) or mean (numeric)
/// of that attribute. Mode ties go to the lowest domain index. When a class has
/// no observed value for an attribute, the global mode or mean is used.
inline Dataset impute_missing(const Dataset& d) {
  if (d.count_missing() == 0) return d;
  const std::size_t n_classes = d.num_classes();
  std::vector<Instance> rows = d.instances();
  for (std::size_t j = 0; j < d.num_attributes(); ++j) {
    const AttributeSpec& attr = d.attribute(j);
    std::vector<double> per_class(n_classes, kMissing);
    double global = kMissing;
    if (attr.is_nominal()) {
      std::vector<std::vector<std::size_t>> counts(n_classes,
                                                   std::vector<std::size_t>(attr.arity(), 0));
      std::vector<std::size_t> total(attr.arity(), 0);
      for (const auto& inst : d.instances()) {
        if (is_missing(inst.values[j])) continue;
        ++counts[inst.label][nominal_index(inst.values[j])];
        ++total[nominal_index(inst.values[j])];
      }
      auto mode = [](const std::vector<std::size_t>& c) -> double {
        auto it = std::max_element(c.begin(), c.end());  // first maximum = lowest index
        return *it == 0 ? kMissing : static_cast<double>(it - c.begin());
      };
      for (std::size_t c = 0; c < n_classes; ++c) per_class[c] = mode(counts[c]);
      global = mode(total);
    } else {
      std::vector<double> sum(n_classes, 0.0);
      std::vector<std::size_t> cnt(n_classes, 0);
      for (const auto& inst : d.instances()) {
        if (is_missing(inst.values[j])) continue;
        sum[inst.label] += inst.values[j];
        ++cnt[inst.label];
      }
      const double all_sum = std::accumulate(sum.begin(), sum.end(), 0.0);
      const std::size_t all_cnt = std::accumulate(cnt.begin(), cnt.end(), std::size_t{0});
      for (std::size_t c = 0; c < n_classes; ++c) {
        if (cnt[c] > 0) per_class[c] = sum[c] / static_cast<double>(cnt[c]);
      }
      if (all_cnt > 0) global = all_sum / static_cast<double>(all_cnt);
    }
    for (auto& inst : rows) {
      if (!is_missing(inst.values[j])) continue;
      double fill = per_class[inst.label];
      if (is_missing(fill)) fill = global;
      if (is_missing(fill)) {
        throw DataError("attribute '" + attr.name + "' has no observed values to impute from");
      }
      inst.values[j] = fill;
    }
  }
  return d.with_instances(std::move(rows));
}

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // fold index per instance
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if (assignments[i] == fold) rows.push_back(i);
    }
    return rows;
  }

  std::vector<std::size_t> train_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if (assignments[i] != fold) rows.push_back(i);
    }
    return rows;
  }

  bool operator==(const FoldPlan&) const = default;
};

/// Stratified k-fold assignment. Each class's members are shuffled with the
/// seed, the classes are laid end to end, and position p goes to fold p mod k,
/// so every class's count per fold differs by at most one.
inline FoldPlan stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("fold count must be at least 2");
  if (k > d.size()) {
    throw DataError("fold count " + std::to_string(k) + " exceeds instance count " +
                    std::to_string(d.size()));
  }
  std::vector<std::vector<std::size_t>> by_class(d.num_classes());
  for (std::size_t i = 0; i < d.size(); ++i) by_class[d[i].label].push_back(i);
  Rng rng(derive_seed(seed, "stratified_folds"));
  FoldPlan plan{k, std::vector<std::size_t>(d.size(), 0), seed};
  std::size_t position = 0;
  for (auto& members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t i : members) plan.assignments[i] = position++ % k;
  }
  return plan;
}

}  // namespace fsforge
