#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fsforge/classifiers/cross_validation.hpp"
#include "fsforge/config.hpp"
#include "fsforge/dataset.hpp"
#include "fsforge/io.hpp"
#include "fsforge/metrics.hpp"
#include "fsforge/parallel.hpp"
#include "fsforge/ranking.hpp"
#include "fsforge/report.hpp"
#include "fsforge/resampling.hpp"
#include "fsforge/run_log.hpp"
#include "fsforge/wrapper_ga.hpp"

namespace fsforge {

/// Loads the configured file and imputes missing cells.
inline Dataset load_dataset(const PipelineConfig& cfg, RunLog* log = nullptr) {
  std::ifstream in(cfg.data_path, std::ios::binary);
  if (!in) throw DataError("cannot open data file '" + cfg.data_path + "'");
  Dataset raw;
  if (cfg.format == DataFormat::arff) {
    raw = load_arff(in, ArffOptions{cfg.class_column});
    if (cfg.all_nominal && !raw.all_nominal()) throw DataError("ARFF file declares numeric attributes");
  } else {
    CsvOptions opts;
    opts.header = cfg.csv_header;
    opts.class_column = cfg.class_column.value_or(0);
    opts.all_nominal = cfg.all_nominal;
    raw = load_csv(in, opts);
  }
  const std::size_t missing = raw.count_missing();
  log_info(log, "data: " + std::to_string(raw.size()) + " instances, " +
                    std::to_string(raw.num_attributes()) + " attributes, " +
                    std::to_string(raw.num_classes()) + " classes, " + std::to_string(missing) +
                    " missing cells imputed");
  return impute_missing(raw);
}

/// Resample, filter, merge.
inline Dataset run_phase1(const Dataset& d, const PipelineConfig& cfg, RunLog* log = nullptr,
                          std::uint64_t stream = 0) {
  SmoteParams sp = cfg.smote_params();
  if (stream != 0) sp.seed = derive_seed(sp.seed, stream);
  const Dataset balanced = balance_dataset(d, sp, log);
  const std::size_t generated = balanced.size() - d.size();
  const Dataset filtered = misclassification_filter(balanced, cfg.filter_scope, log);
  const Dataset merged = merge_with_original(d, filtered);
  log_info(log, "phase1: original " + std::to_string(d.size()) + ", synthetic " +
                    std::to_string(generated) + ", survivors " +
                    std::to_string(merged.size() - d.size()) + ", final " + std::to_string(merged.size()));
  return merged;
}

struct Phase2Result {
  std::vector<FeatureScore> ranking;
  std::vector<std::size_t> candidates;  // post-threshold, rank order
  GaResult ga;
  std::vector<std::size_t> selected;    // ascending
};

inline std::vector<std::size_t> filter_candidates(const std::vector<FeatureScore>& ranking,
                                                  const PipelineConfig& cfg) {
  return cfg.ig_top_k ? select_top_k(ranking, *cfg.ig_top_k)
                      : select_above_threshold(ranking, cfg.ig_threshold);
}

// Ranking runs on an all-nominal view; numeric attributes are binned for it.
inline std::vector<FeatureScore> rank_dataset(const Dataset& d, const PipelineConfig& cfg, ScoreKind kind) {
  return rank_features(d.all_nominal() ? d : discretize_all(d, cfg.discretize_bins), kind);
}

/// Ranks by `kind`, keeps the attributes above threshold, then runs the GA
/// wrapper over them with a rank-ordered initial population.
inline Phase2Result run_phase2(const Dataset& d, const PipelineConfig& cfg, RunLog* log = nullptr,
                               std::size_t threads = 1, ScoreKind kind = ScoreKind::info_gain) {
  Phase2Result out;
  out.ranking = rank_dataset(d, cfg, kind);
  out.candidates = filter_candidates(out.ranking, cfg);
  log_info(log, "phase2: " + std::to_string(out.candidates.size()) + " of " +
                    std::to_string(d.num_attributes()) + " attributes pass the filter");
  const FoldPlan wrapper_folds = stratified_folds(d, cfg.wrapper_folds, derive_seed(cfg.seed, "wrapper"));
  out.ga = evolve(out.candidates, d, wrapper_folds, cfg.ga_params(), threads, PopulationSeeding::rank_ladder);
  out.selected = out.ga.selected;
  log_info(log, "phase2: genetic search kept " + std::to_string(out.selected.size()) +
                    " attributes, wrapper accuracy " + detail::format_number(out.ga.best_fitness) +
                    ", " + std::to_string(out.ga.evaluations) + " fitness evaluations");
  return out;
}

struct MethodRun {
  EvaluationReport report;
  std::vector<std::size_t> selected;
  std::optional<GaResult> ga;
  RunLog log;
};

namespace detail {

inline std::vector<std::string> attribute_names(const Dataset& d, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t j : idx) out.push_back(d.attribute(j).name);
  return out;
}

inline ClassifierReport score_predictions(ClassifierId id, const CvResult& cv, const Dataset& d,
                                          Averaging averaging) {
  ClassifierReport r;
  r.classifier = id;
  r.ms = misclassified_count(cv.predictions, d);
  r.rae = relative_absolute_error(cv.predictions, d, cv.training_priors);
  const RateSummary rs = class_rates(cv.predictions, d);
  r.rates = averaging == Averaging::macro ? rs.macro : rs.micro;
  r.per_class = rs.per_class;
  return r;
}

}  // namespace detail

/// Runs one feature-selection method and evaluates the five classifiers on
/// its output. Baselines work on the raw dataset; hybrid evaluates on the
/// Phase 1 dataset unless leak_free, in which case Phase 1 is rebuilt from
/// each outer training fold and only original instances are tested.
inline MethodRun run_method(const Dataset& d, const PipelineConfig& cfg, std::size_t threads = 1) {
  cfg.validate();
  MethodRun run;
  RunLog* log = &run.log;
  log_info(log, "method: " + std::string(to_string(cfg.method)));
  Dataset eval = d;
  std::vector<std::size_t> features(d.num_attributes());
  for (std::size_t j = 0; j < features.size(); ++j) features[j] = j;

  switch (cfg.method) {
    case Method::all_features:
      break;
    case Method::info_gain: {
      features = filter_candidates(rank_dataset(d, cfg, ScoreKind::info_gain), cfg);
      std::sort(features.begin(), features.end());
      break;
    }
    case Method::ga_wrapper: {
      const FoldPlan wf = stratified_folds(d, cfg.wrapper_folds, derive_seed(cfg.seed, "wrapper"));
      run.ga = evolve(features, d, wf, cfg.ga_params(), threads, PopulationSeeding::random);
      features = run.ga->selected;
      break;
    }
    case Method::su_ga_wrapper: {
      Phase2Result p2 = run_phase2(d, cfg, log, threads, ScoreKind::symmetrical_uncertainty);
      features = p2.selected;
      run.ga = std::move(p2.ga);
      break;
    }
    case Method::hybrid: {
      const Dataset phase1 = run_phase1(d, cfg, log);
      Phase2Result p2 = run_phase2(phase1, cfg, log, threads, ScoreKind::info_gain);
      features = p2.selected;
      run.ga = std::move(p2.ga);
      if (!cfg.leak_free) eval = phase1;
      break;
    }
  }
  run.selected = features;
  log_info(log, "selected " + std::to_string(features.size()) + " attributes");

  const Dataset projected = eval.project(features);
  const bool leak_free = cfg.method == Method::hybrid && cfg.leak_free;
  EvaluationReport& rep = run.report;
  rep.method = std::string(to_string(cfg.method));
  rep.seed = cfg.seed;
  rep.averaging = cfg.averaging == Averaging::macro ? "macro" : "micro";
  rep.instances = projected.size();
  rep.synthetic_instances = static_cast<std::size_t>(std::count_if(
      projected.instances().begin(), projected.instances().end(), [](const Instance& i) { return i.is_synthetic(); }));
  rep.class_domain = d.class_domain();
  rep.selected_features = detail::attribute_names(d, features);

  std::optional<FoldPlan> outer;
  if (cfg.protocol == Protocol::cross_validation) {
    outer = stratified_folds(projected, cfg.outer_folds, derive_seed(cfg.seed, "outer"));
    rep.fold_plan = "stratified-cv k=" + std::to_string(cfg.outer_folds) + (leak_free ? " leak-free" : "");
  } else {
    rep.fold_plan = "resubstitution";
  }

  // Leak-free training sets: Phase 1 applied to each outer training fold alone.
  std::vector<Dataset> fold_train;
  if (leak_free && outer) {
    fold_train.resize(outer->k);
    parallel_for(outer->k, threads, [&](std::size_t f) {
      const Dataset train = d.select_rows(outer->train_rows(f));
      fold_train[f] = run_phase1(train, cfg, nullptr, f + 1).project(features);
    });
  }

  std::vector<ClassifierReport> rows(std::size(kAllClassifiers));
  parallel_for(rows.size(), threads, [&](std::size_t c) {
    const ClassifierId id = kAllClassifiers[c];
    const std::uint64_t model_seed = derive_seed(cfg.seed, to_string(id));
    CvResult cv;
    if (!outer) {
      cv = resubstitute(id, projected, model_seed);
    } else if (!leak_free) {
      cv = cross_validate(id, projected, *outer, model_seed, 1);
    } else {
      cv.predictions.assign(projected.size(), {});
      cv.training_priors.assign(projected.size(), {});
      for (std::size_t f = 0; f < outer->k; ++f) {
        auto model = make_classifier(id, derive_seed(model_seed, f));
        model->fit(fold_train[f]);
        const Distribution prior = class_frequencies(fold_train[f]);
        for (std::size_t r : outer->test_rows(f)) {
          cv.predictions[r] = model->predict_distribution(projected[r]);
          cv.training_priors[r] = prior;
        }
        ++cv.models_trained;
      }
    }
    rows[c] = detail::score_predictions(id, cv, projected, cfg.averaging);
  });
  rep.classifiers = std::move(rows);
  summarize(rep);
  log_info(log, "AMS " + detail::format_number(rep.group.ams) + ", ARAE " +
                    detail::format_number(rep.group.arae));
  return run;
}

inline MethodRun run_method(const PipelineConfig& cfg, std::size_t threads = 1) {
  RunLog load_log;
  const Dataset d = load_dataset(cfg, &load_log);
  MethodRun run = run_method(d, cfg, threads);
  load_log.append(run.log);
  run.log = load_log;
  return run;
}

struct Comparison {
  std::vector<MethodRun> runs;
};

/// Runs every config (same dataset and seed) and collects the reports in
/// input order. Method runs execute concurrently; results do not depend on
/// the thread count.
inline Comparison compare_methods(const Dataset& d, const std::vector<PipelineConfig>& cfgs,
                                  std::size_t threads = 1) {
  if (cfgs.empty()) throw ConfigError("compare needs at least one method");
  for (const auto& c : cfgs) {
    if (c.data_path != cfgs.front().data_path || c.seed != cfgs.front().seed) {
      throw ConfigError("compare: every method must share the dataset and seed");
    }
  }
  Comparison out;
  out.runs.resize(cfgs.size());
  parallel_for(cfgs.size(), threads, [&](std::size_t i) { out.runs[i] = run_method(d, cfgs[i], threads); });
  return out;
}

inline nlohmann::ordered_json comparison_json(const Comparison& c) {
  nlohmann::ordered_json j;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : c.runs) j["reports"].push_back(to_json(r.report));
  return j;
}

/// Plot-ready series, keyed by file name under series/.
inline std::map<std::string, std::string> comparison_series(const Comparison& c) {
  std::ostringstream ms, rae, rates, group;
  ms << "method,classifier,ms\n";
  rae << "method,classifier,rae\n";
  rates << "method,classifier,tp_rate,tn_rate,fp_rate,fn_rate\n";
  group << "method,parameter,value\n";
  auto num = [](double v) { return detail::format_number(v); };
  for (const auto& run : c.runs) {
    const auto& r = run.report;
    for (const auto& row : r.classifiers) {
      const auto name = to_string(row.classifier);
      ms << r.method << ',' << name << ',' << row.ms << '\n';
      rae << r.method << ',' << name << ',' << num(row.rae) << '\n';
      rates << r.method << ',' << name << ',' << num(row.rates.tp_rate) << ',' << num(row.rates.tn_rate)
            << ',' << num(row.rates.fp_rate) << ',' << num(row.rates.fn_rate) << '\n';
    }
    const std::pair<const char*, double> bars[] = {
        {"AMS", r.group.ams},           {"ARAE", r.group.arae},         {"ATPRate", r.group.atp_rate},
        {"ATNRate", r.group.atn_rate}, {"AFPRate", r.group.afp_rate}, {"AFNRate", r.group.afn_rate}};
    for (const auto& [name, value] : bars) group << r.method << ',' << name << ',' << num(value) << '\n';
  }
  return {{"ms_per_classifier.csv", ms.str()},
          {"rae_per_classifier.csv", rae.str()},
          {"rates_per_classifier.csv", rates.str()},
          {"group_bars.csv", group.str()}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

/// Writes report.json, report.csv, series/*.csv, trace/ga_trace*.csv,
/// selected_features.json and run.log under `dir`.
inline void write_outputs(const std::filesystem::path& dir, const Comparison& c, bool single) {
  std::string csv = csv_header();
  for (const auto& run : c.runs) csv += to_csv_rows(run.report);
  if (single) {
    write_text(dir / "report.json", to_json(c.runs.front().report).dump(2) + "\n");
    write_text(dir / "selected_features.json",
               nlohmann::json(c.runs.front().report.selected_features).dump() + "\n");
  } else {
    write_text(dir / "report.json", comparison_json(c).dump(2) + "\n");
  }
  write_text(dir / "report.csv", csv);
  for (const auto& [name, text] : comparison_series(c)) write_text(dir / "series" / name, text);
  std::ostringstream log;
  for (const auto& run : c.runs) {
    run.log.write(log);
    if (!run.ga) continue;
    const std::string file = single ? "ga_trace.csv" : "ga_trace_" + run.report.method + ".csv";
    write_text(dir / "trace" / file, trace_csv(run.ga->trace));
  }
  write_text(dir / "run.log", log.str());
}

}  // namespace fsforge
