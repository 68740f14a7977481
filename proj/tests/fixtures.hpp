#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "fsforge/fsforge.hpp"

namespace fixtures {

using namespace fsforge;

inline std::string lung_path() { return std::string(FSFORGE_DATA_DIR) + "/lung-cancer.data"; }

inline Dataset lung_raw() {
  std::ifstream in(lung_path());
  return load_uci_lung_cancer(in);
}

inline Dataset lung() { return impute_missing(lung_raw()); }

// Nominal dataset from integer codes; every attribute takes `arity` values.
inline Dataset nominal(const std::vector<std::vector<int>>& rows, const std::vector<std::size_t>& labels,
                       std::size_t arity = 2, std::size_t classes = 2) {
  std::vector<AttributeSpec> schema;
  std::vector<std::string> domain;
  for (std::size_t v = 0; v < arity; ++v) domain.push_back(std::to_string(v));
  for (std::size_t j = 0; j < rows.front().size(); ++j) {
    schema.push_back(AttributeSpec::make_nominal("f" + std::to_string(j), domain));
  }
  std::vector<std::string> cls;
  for (std::size_t c = 0; c < classes; ++c) cls.push_back("c" + std::to_string(c));
  std::vector<Instance> inst;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> v(rows[i].begin(), rows[i].end());
    inst.push_back({v, labels[i], Origin::original});
  }
  return Dataset("fixture", schema, cls, inst);
}

inline Dataset numeric(const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& labels,
                       std::size_t classes = 2) {
  std::vector<AttributeSpec> schema;
  for (std::size_t j = 0; j < rows.front().size(); ++j) {
    schema.push_back(AttributeSpec::make_numeric("x" + std::to_string(j)));
  }
  std::vector<std::string> cls;
  for (std::size_t c = 0; c < classes; ++c) cls.push_back("c" + std::to_string(c));
  std::vector<Instance> inst;
  for (std::size_t i = 0; i < rows.size(); ++i) inst.push_back({rows[i], labels[i], Origin::original});
  return Dataset("fixture", schema, cls, inst);
}

// Binary features; the class is a boolean function of features 0 and 1,
// flipped with probability `noise`; the remaining features are fair coins.
template <class Rule>
Dataset boolean_task(std::size_t n, std::size_t features, std::uint64_t seed, double noise, Rule rule) {
  Rng rng(seed);
  std::vector<std::vector<int>> rows;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> r(features);
    for (auto& v : r) v = rng.bernoulli(0.5) ? 1 : 0;
    std::size_t y = rule(r[0], r[1]) ? 1 : 0;
    if (rng.bernoulli(noise)) y = 1 - y;
    rows.push_back(r);
    labels.push_back(y);
  }
  return nominal(rows, labels);
}

}  // namespace fixtures
