#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fsforge/error.hpp"
#include "fsforge/io.hpp"
#include "fsforge/resampling.hpp"
#include "fsforge/wrapper_ga.hpp"

namespace fsforge {

enum class Method { all_features, info_gain, ga_wrapper, su_ga_wrapper, hybrid };

inline constexpr Method kAllMethods[] = {Method::all_features, Method::info_gain, Method::ga_wrapper,
                                         Method::su_ga_wrapper, Method::hybrid};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::all_features: return "all_features";
    case Method::info_gain: return "info_gain";
    case Method::ga_wrapper: return "ga_wrapper";
    case Method::su_ga_wrapper: return "su_ga_wrapper";
    case Method::hybrid: return "hybrid";
  }
  return "unknown";
}

inline Method parse_method(std::string_view s) {
  for (Method m : kAllMethods) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown method '" + std::string(s) +
                    "' (valid: all_features, info_gain, ga_wrapper, su_ga_wrapper, hybrid)");
}

inline bool uses_ranking(Method m) {
  return m == Method::info_gain || m == Method::su_ga_wrapper || m == Method::hybrid;
}
inline bool uses_ga(Method m) {
  return m == Method::ga_wrapper || m == Method::su_ga_wrapper || m == Method::hybrid;
}
inline bool uses_resampling(Method m) { return m == Method::hybrid; }

enum class DataFormat { arff, csv };
enum class Protocol { cross_validation, resubstitution };
enum class Averaging { macro, micro };

inline constexpr std::uint64_t kDefaultSeed = 42;

struct PipelineConfig {
  // [data]
  std::string data_path;
  DataFormat format = DataFormat::csv;
  std::optional<std::size_t> class_column;  // arff: default last; csv: default 0
  bool csv_header = true;
  bool all_nominal = false;
  // [run]
  std::uint64_t seed = kDefaultSeed;
  Method method = Method::hybrid;
  std::size_t outer_folds = 10;
  Protocol protocol = Protocol::cross_validation;
  Averaging averaging = Averaging::macro;
  std::size_t discretize_bins = 10;
  // [smote] + [filter]
  std::size_t smote_k = 5;
  FilterScope filter_scope = FilterScope::synthetic_only;
  bool leak_free = false;
  // [ranking]
  double ig_threshold = 0.0;
  std::optional<std::size_t> ig_top_k;
  // [ga] + [wrapper]
  std::size_t ga_population = 20;
  std::size_t ga_generations = 20;
  double ga_crossover = 0.6;
  double ga_mutation = 0.033;
  std::size_t ga_elitism = 1;
  std::size_t wrapper_folds = 5;

  bool operator==(const PipelineConfig&) const = default;

  SmoteParams smote_params() const {
    SmoteParams p;
    p.k_neighbors = smote_k;
    p.seed = derive_seed(seed, "smote");
    return p;
  }

  GaParams ga_params() const {
    GaParams p;
    p.population_size = ga_population;
    p.max_generations = ga_generations;
    p.crossover_probability = ga_crossover;
    p.mutation_probability = ga_mutation;
    p.elitism = ga_elitism;
    p.seed = derive_seed(seed, "ga");
    return p;
  }

  void validate() const {
    if (outer_folds < 2) throw ConfigError("outer folds must be at least 2");
    if (wrapper_folds < 2) throw ConfigError("wrapper folds must be at least 2");
    if (discretize_bins < 2) throw ConfigError("discretize bins must be at least 2");
    if (ig_top_k && *ig_top_k == 0) throw ConfigError("ig top-k must be at least 1");
    smote_params().validate();
    ga_params().validate();
  }

  // Resets the sections this method does not use, so equal runs compare equal.
  PipelineConfig normalized() const {
    PipelineConfig d;
    PipelineConfig out = *this;
    if (!uses_resampling(method)) {
      out.smote_k = d.smote_k;
      out.filter_scope = d.filter_scope;
      out.leak_free = d.leak_free;
    }
    if (!uses_ranking(method)) {
      out.ig_threshold = d.ig_threshold;
      out.ig_top_k = d.ig_top_k;
    }
    if (!uses_ga(method)) {
      out.ga_population = d.ga_population;
      out.ga_generations = d.ga_generations;
      out.ga_crossover = d.ga_crossover;
      out.ga_mutation = d.ga_mutation;
      out.ga_elitism = d.ga_elitism;
      out.wrapper_folds = d.wrapper_folds;
    }
    return out;
  }
};

/// The pinned reproduction setup: bundled UCI Lung-Cancer file, class in
/// column 0, every attribute nominal.
inline PipelineConfig lung_cancer_config(std::string path, Method method = Method::hybrid) {
  PipelineConfig c;
  c.data_path = std::move(path);
  c.format = DataFormat::csv;
  c.class_column = 0;
  c.csv_header = false;
  c.all_nominal = true;
  c.method = method;
  return c;
}

// Seed from FSFORGE_SEED when set, else the built-in default.
inline std::uint64_t seed_from_environment() {
  if (const char* env = std::getenv("FSFORGE_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("FSFORGE_SEED is not an unsigned integer: '") + env + "'");
  }
  return kDefaultSeed;
}

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  const std::string s = lower(v);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

inline std::size_t parse_count(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v.front() == '-') throw std::invalid_argument("negative");
    const auto n = std::stoull(v, &used);
    if (used == v.size()) return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
}

inline double parse_real(const std::string& v, const std::string& key) {
  auto r = parse_number(v);
  if (!r) throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  return *r;
}

}  // namespace detail

/// Sets one "section.key" entry. Shared by the config file reader and the CLI.
inline void set_config_value(PipelineConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "data.path") {
    c.data_path = value;
  } else if (key == "data.format") {
    const std::string f = lower(value);
    if (f == "arff") c.format = DataFormat::arff;
    else if (f == "csv") c.format = DataFormat::csv;
    else throw ConfigError("data.format must be arff or csv, got '" + value + "'");
  } else if (key == "data.class_col") {
    if (lower(value) == "default") c.class_column.reset();
    else c.class_column = parse_count(value, key);
  } else if (key == "data.header") {
    c.csv_header = parse_bool(value, key);
  } else if (key == "data.nominal") {
    c.all_nominal = parse_bool(value, key);
  } else if (key == "run.seed") {
    c.seed = parse_count(value, key);
  } else if (key == "run.method") {
    c.method = parse_method(value);
  } else if (key == "run.folds") {
    c.outer_folds = parse_count(value, key);
  } else if (key == "run.protocol") {
    if (value == "cv") c.protocol = Protocol::cross_validation;
    else if (value == "resubstitution") c.protocol = Protocol::resubstitution;
    else throw ConfigError("run.protocol must be cv or resubstitution, got '" + value + "'");
  } else if (key == "run.averaging") {
    if (value == "macro") c.averaging = Averaging::macro;
    else if (value == "micro") c.averaging = Averaging::micro;
    else throw ConfigError("run.averaging must be macro or micro, got '" + value + "'");
  } else if (key == "run.bins") {
    c.discretize_bins = parse_count(value, key);
  } else if (key == "smote.k") {
    c.smote_k = parse_count(value, key);
  } else if (key == "smote.leak_free") {
    c.leak_free = parse_bool(value, key);
  } else if (key == "filter.scope") {
    if (value == "synthetic-only") c.filter_scope = FilterScope::synthetic_only;
    else if (value == "all") c.filter_scope = FilterScope::all;
    else throw ConfigError("filter.scope must be synthetic-only or all, got '" + value + "'");
  } else if (key == "ranking.ig_threshold") {
    c.ig_threshold = parse_real(value, key);
  } else if (key == "ranking.ig_top_k") {
    if (lower(value) == "none") c.ig_top_k.reset();
    else c.ig_top_k = parse_count(value, key);
  } else if (key == "ga.population") {
    c.ga_population = parse_count(value, key);
  } else if (key == "ga.generations") {
    c.ga_generations = parse_count(value, key);
  } else if (key == "ga.crossover") {
    c.ga_crossover = parse_real(value, key);
  } else if (key == "ga.mutation") {
    c.ga_mutation = parse_real(value, key);
  } else if (key == "ga.elitism") {
    c.ga_elitism = parse_count(value, key);
  } else if (key == "wrapper.folds") {
    c.wrapper_folds = parse_count(value, key);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

/// Reads the flat key-value config: "[section]" headers, "key = value" lines,
/// '#' or ';' comments. Later entries override earlier ones.
inline PipelineConfig parse_config(std::istream& in, PipelineConfig base = {}) {
  std::string raw, section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    if (section.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": key outside a section");
    const std::string key = section + "." + std::string(detail::trim(line.substr(0, eq)));
    set_config_value(base, key, std::string(detail::trim(line.substr(eq + 1))));
  }
  return base;
}

inline PipelineConfig parse_config(const std::string& text, PipelineConfig base = {}) {
  std::istringstream in(text);
  return parse_config(in, std::move(base));
}

/// Writes the config file form. Sections the method does not use are left
/// out, so parse_config(to_config_text(c)) == c.normalized().
inline std::string to_config_text(const PipelineConfig& c) {
  std::ostringstream o;
  auto real = [](double v) { return detail::format_number(v); };
  o << "[data]\n"
    << "path = " << c.data_path << '\n'
    << "format = " << (c.format == DataFormat::arff ? "arff" : "csv") << '\n'
    << "class_col = " << (c.class_column ? std::to_string(*c.class_column) : "default") << '\n'
    << "header = " << (c.csv_header ? "true" : "false") << '\n'
    << "nominal = " << (c.all_nominal ? "true" : "false") << "\n\n";
  o << "[run]\n"
    << "seed = " << c.seed << '\n'
    << "method = " << to_string(c.method) << '\n'
    << "folds = " << c.outer_folds << '\n'
    << "protocol = " << (c.protocol == Protocol::cross_validation ? "cv" : "resubstitution") << '\n'
    << "averaging = " << (c.averaging == Averaging::macro ? "macro" : "micro") << '\n'
    << "bins = " << c.discretize_bins << '\n';
  if (uses_resampling(c.method)) {
    o << "\n[smote]\n"
      << "k = " << c.smote_k << '\n'
      << "leak_free = " << (c.leak_free ? "true" : "false") << '\n'
      << "\n[filter]\n"
      << "scope = " << (c.filter_scope == FilterScope::synthetic_only ? "synthetic-only" : "all") << '\n';
  }
  if (uses_ranking(c.method)) {
    o << "\n[ranking]\n"
      << "ig_threshold = " << real(c.ig_threshold) << '\n'
      << "ig_top_k = " << (c.ig_top_k ? std::to_string(*c.ig_top_k) : "none") << '\n';
  }
  if (uses_ga(c.method)) {
    o << "\n[ga]\n"
      << "population = " << c.ga_population << '\n'
      << "generations = " << c.ga_generations << '\n'
      << "crossover = " << real(c.ga_crossover) << '\n'
      << "mutation = " << real(c.ga_mutation) << '\n'
      << "elitism = " << c.ga_elitism << '\n'
      << "\n[wrapper]\n"
      << "folds = " << c.wrapper_folds << '\n';
  }
  return o.str();
}

}  // namespace fsforge
