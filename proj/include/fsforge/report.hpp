#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsforge/classifiers/classifier.hpp"
#include "fsforge/error.hpp"
#include "fsforge/io.hpp"
#include "fsforge/metrics.hpp"
#include "fsforge/wrapper_ga.hpp"

namespace fsforge {

struct ClassifierReport {
  ClassifierId classifier = ClassifierId::naive_bayes;
  std::size_t ms = 0;
  double rae = 0.0;  // percent
  ClassRates rates;  // classifier-level (macro or micro average over classes)
  std::vector<ClassRates> per_class;
};

struct GroupReport {
  double ams = 0.0;
  double arae = 0.0;
  double atp_rate = 0.0;
  double atn_rate = 0.0;
  double afp_rate = 0.0;
  double afn_rate = 0.0;
};

struct EvaluationReport {
  std::string method;
  std::uint64_t seed = 0;
  std::string fold_plan;  // e.g. "stratified-cv k=10" or "resubstitution"
  std::string averaging = "macro";
  std::size_t instances = 0;
  std::size_t synthetic_instances = 0;
  std::vector<std::string> class_domain;
  std::vector<std::string> selected_features;
  std::vector<ClassifierReport> classifiers;
  GroupReport group;
};

/// Fills report.group from the per-classifier rows (AMS, ARAE and the four
/// average rates are plain means over the classifiers).
inline void summarize(EvaluationReport& r) {
  if (r.classifiers.empty()) throw DataError("report has no classifier rows");
  std::vector<double> ms, rae;
  std::vector<ClassRates> rates;
  for (const auto& c : r.classifiers) {
    ms.push_back(static_cast<double>(c.ms));
    rae.push_back(c.rae);
    rates.push_back(c.rates);
  }
  r.group.ams = ams(ms);
  r.group.arae = arae(rae);
  const GroupRates g = group_rates(rates);
  r.group.atp_rate = g.atp_rate;
  r.group.atn_rate = g.atn_rate;
  r.group.afp_rate = g.afp_rate;
  r.group.afn_rate = g.afn_rate;
}

inline nlohmann::ordered_json rates_json(const ClassRates& r) {
  return {{"tp_rate", r.tp_rate}, {"tn_rate", r.tn_rate}, {"fp_rate", r.fp_rate},
          {"fn_rate", r.fn_rate}, {"zero_denominator", r.zero_denominator}};
}

inline ClassRates rates_from_json(const nlohmann::ordered_json& j) {
  return {j.at("tp_rate").get<double>(), j.at("tn_rate").get<double>(), j.at("fp_rate").get<double>(),
          j.at("fn_rate").get<double>(), j.at("zero_denominator").get<bool>()};
}

inline nlohmann::ordered_json to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["seed"] = r.seed;
  j["fold_plan"] = r.fold_plan;
  j["averaging"] = r.averaging;
  j["instances"] = r.instances;
  j["synthetic_instances"] = r.synthetic_instances;
  j["class_domain"] = r.class_domain;
  j["selected_features"] = r.selected_features;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& c : r.classifiers) {
    nlohmann::ordered_json row;
    row["classifier"] = std::string(to_string(c.classifier));
    row["ms"] = c.ms;
    row["rae"] = c.rae;
    row["rates"] = rates_json(c.rates);
    nlohmann::ordered_json per = nlohmann::ordered_json::array();
    for (const auto& pc : c.per_class) per.push_back(rates_json(pc));
    row["per_class"] = per;
    rows.push_back(row);
  }
  j["classifiers"] = rows;
  j["group"] = {{"ams", r.group.ams},           {"arae", r.group.arae},
                {"atp_rate", r.group.atp_rate}, {"atn_rate", r.group.atn_rate},
                {"afp_rate", r.group.afp_rate}, {"afn_rate", r.group.afn_rate}};
  return j;
}

inline EvaluationReport report_from_json(const nlohmann::ordered_json& j) {
  EvaluationReport r;
  r.method = j.at("method").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.fold_plan = j.at("fold_plan").get<std::string>();
  r.averaging = j.at("averaging").get<std::string>();
  r.instances = j.at("instances").get<std::size_t>();
  r.synthetic_instances = j.at("synthetic_instances").get<std::size_t>();
  r.class_domain = j.at("class_domain").get<std::vector<std::string>>();
  r.selected_features = j.at("selected_features").get<std::vector<std::string>>();
  for (const auto& row : j.at("classifiers")) {
    ClassifierReport c;
    const std::string name = row.at("classifier").get<std::string>();
    bool known = false;
    for (ClassifierId id : kAllClassifiers) {
      if (to_string(id) == name) {
        c.classifier = id;
        known = true;
      }
    }
    if (!known) throw DataError("report names unknown classifier '" + name + "'");
    c.ms = row.at("ms").get<std::size_t>();
    c.rae = row.at("rae").get<double>();
    c.rates = rates_from_json(row.at("rates"));
    for (const auto& pc : row.at("per_class")) c.per_class.push_back(rates_from_json(pc));
    r.classifiers.push_back(std::move(c));
  }
  const auto& g = j.at("group");
  r.group = {g.at("ams").get<double>(),      g.at("arae").get<double>(),
             g.at("atp_rate").get<double>(), g.at("atn_rate").get<double>(),
             g.at("afp_rate").get<double>(), g.at("afn_rate").get<double>()};
  return r;
}

inline std::string csv_header() { return "method,classifier,instances,ms,rae,tp_rate,tn_rate,fp_rate,fn_rate\n"; }

// One flat row per classifier.
inline std::string to_csv_rows(const EvaluationReport& r) {
  std::ostringstream o;
  for (const auto& c : r.classifiers) {
    o << r.method << ',' << to_string(c.classifier) << ',' << r.instances << ',' << c.ms << ','
      << detail::format_number(c.rae) << ',' << detail::format_number(c.rates.tp_rate) << ','
      << detail::format_number(c.rates.tn_rate) << ',' << detail::format_number(c.rates.fp_rate) << ','
      << detail::format_number(c.rates.fn_rate) << '\n';
  }
  return o.str();
}

inline std::string trace_csv(const std::vector<GenerationTrace>& trace) {
  std::ostringstream o;
  o << "generation,best_fitness,mean_fitness,best_mask_size\n";
  for (const auto& t : trace) {
    o << t.generation << ',' << detail::format_number(t.best_fitness) << ','
      << detail::format_number(t.mean_fitness) << ',' << t.best_mask_size << '\n';
  }
  return o.str();
}

}  // namespace fsforge
