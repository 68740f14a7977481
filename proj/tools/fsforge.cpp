#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fsforge/fsforge.hpp"
#include "fsforge/selftest.hpp"

namespace {

using namespace fsforge;

struct Options {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::size_t threads = 0;
  std::string out;
  std::vector<std::string> methods;
};

// Registers a flag that is forwarded as a config key when given.
void forward(CLI::App& app, Options& o, const std::string& flag, const std::string& key, const std::string& help) {
  app.add_option_function<std::string>(
      flag, [&o, key](const std::string& v) { o.overrides.emplace_back(key, v); }, help);
}

void forward_switch(CLI::App& app, Options& o, const std::string& flag, const std::string& key,
                    const std::string& help) {
  app.add_flag_function(
      flag, [&o, key](std::int64_t) { o.overrides.emplace_back(key, "true"); }, help);
}

void add_common(CLI::App& app, Options& o) {
  app.add_option("--config", o.config_file, "Config file ([section] key = value)");
  forward(app, o, "--data", "data.path", "Dataset path (default: bundled lung-cancer.data)");
  forward(app, o, "--format", "data.format", "arff or csv");
  forward(app, o, "--class-col", "data.class_col", "Class column index");
  forward(app, o, "--csv-header", "data.header", "CSV has a header row (true/false)");
  forward_switch(app, o, "--nominal", "data.nominal", "Treat every CSV attribute as nominal");
  forward(app, o, "--seed", "run.seed", "Master seed (falls back to FSFORGE_SEED, then 42)");
  forward(app, o, "--folds", "run.folds", "Outer cross-validation folds");
  forward(app, o, "--protocol", "run.protocol", "cv or resubstitution");
  forward(app, o, "--averaging", "run.averaging", "macro or micro");
  forward(app, o, "--bins", "run.bins", "Equal-width bins for numeric ranking");
  forward(app, o, "--smote-k", "smote.k", "SMOTE neighbours");
  forward_switch(app, o, "--leak-free", "smote.leak_free", "Resample inside each training fold");
  forward(app, o, "--filter-scope", "filter.scope", "synthetic-only or all");
  forward(app, o, "--ig-threshold", "ranking.ig_threshold", "Keep features with IG above this");
  forward(app, o, "--ig-top-k", "ranking.ig_top_k", "Keep the k best-ranked features");
  forward(app, o, "--ga-pop", "ga.population", "GA population size");
  forward(app, o, "--ga-gens", "ga.generations", "GA generations");
  forward(app, o, "--ga-crossover", "ga.crossover", "Crossover probability");
  forward(app, o, "--ga-mutation", "ga.mutation", "Per-bit mutation probability");
  forward(app, o, "--elitism", "ga.elitism", "Chromosomes copied unchanged per generation");
  forward(app, o, "--wrapper-folds", "wrapper.folds", "Folds inside the GA fitness");
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

PipelineConfig build_config(const Options& o) {
  PipelineConfig cfg = lung_cancer_config(std::string(FSFORGE_DATA_DIR) + "/lung-cancer.data");
  cfg.seed = seed_from_environment();
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw ConfigError("cannot open config file '" + o.config_file + "'");
    cfg = parse_config(in, cfg);
  }
  for (const auto& [key, value] : o.overrides) set_config_value(cfg, key, value);
  cfg.validate();
  return cfg;
}

void print_summary(const EvaluationReport& r) {
  std::cout << r.method << ": " << r.instances << " instances, " << r.selected_features.size()
            << " features, AMS " << r.group.ams << ", ARAE " << r.group.arae << "%\n";
  for (const auto& c : r.classifiers) {
    std::cout << "  " << to_string(c.classifier) << "  MS " << c.ms << "  RAE " << c.rae << "%\n";
  }
}

int cmd_run(const Options& o) {
  const PipelineConfig cfg = build_config(o);
  const MethodRun run = run_method(cfg, o.threads);
  print_summary(run.report);
  if (!o.out.empty()) write_outputs(o.out, Comparison{{run}}, true);
  else std::cout << to_json(run.report).dump(2) << '\n';
  return 0;
}

int cmd_compare(const Options& o) {
  const PipelineConfig base = build_config(o);
  RunLog load_log;
  const Dataset d = load_dataset(base, &load_log);
  std::vector<PipelineConfig> cfgs;
  if (o.methods.empty()) {
    for (Method m : kAllMethods) {
      cfgs.push_back(base);
      cfgs.back().method = m;
    }
  } else {
    for (const auto& name : o.methods) {
      cfgs.push_back(base);
      cfgs.back().method = parse_method(name);
    }
  }
  Comparison c = compare_methods(d, cfgs, o.threads);
  for (const auto& run : c.runs) print_summary(run.report);
  if (!c.runs.empty()) {
    load_log.append(c.runs.front().log);
    c.runs.front().log = load_log;
  }
  if (!o.out.empty()) write_outputs(o.out, c, false);
  else std::cout << comparison_json(c).dump(2) << '\n';
  return 0;
}

int cmd_rank(const Options& o) {
  const PipelineConfig cfg = build_config(o);
  const Dataset d = load_dataset(cfg);
  const auto ig = rank_dataset(d, cfg, ScoreKind::info_gain);
  const auto su = rank_dataset(d, cfg, ScoreKind::symmetrical_uncertainty);
  std::vector<double> su_of(d.num_attributes());
  for (const auto& s : su) su_of[s.attribute] = s.score;
  std::ostringstream csv;
  csv << "attribute,ig,su,rank\n";
  for (const auto& s : ig) {
    csv << detail::quote_if_needed(d.schema()[s.attribute].name) << ',' << detail::format_number(s.score) << ','
        << detail::format_number(su_of[s.attribute]) << ',' << s.rank << '\n';
  }
  if (o.out.empty()) std::cout << csv.str();
  else write_text(std::filesystem::path(o.out) / "ranking.csv", csv.str());
  return 0;
}

int cmd_smote(const Options& o) {
  const PipelineConfig cfg = build_config(o);
  RunLog log;
  const Dataset d = load_dataset(cfg, &log);
  const Dataset merged = run_phase1(d, cfg, &log);
  if (o.out.empty()) {
    std::cout << to_arff(merged);
  } else {
    write_text(std::filesystem::path(o.out) / "phase1.arff", to_arff(merged));
    std::ostringstream text;
    log.write(text);
    write_text(std::filesystem::path(o.out) / "run.log", text.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase feature selection and classifier comparison"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Evaluate one method");
  add_common(*run, o);
  run->add_option_function<std::string>(
      "--method", [&o](const std::string& v) { o.overrides.emplace_back("run.method", v); },
      "all_features, info_gain, ga_wrapper, su_ga_wrapper or hybrid");
  run->add_option("--out", o.out, "Output directory (default: JSON on stdout)");

  auto* compare = app.add_subcommand("compare", "Evaluate several methods on the same folds");
  add_common(*compare, o);
  compare->add_option("--methods", o.methods, "Methods to compare (default: all five)")->delimiter(',');
  compare->add_option("--out", o.out, "Output directory (default: JSON on stdout)");

  auto* rank = app.add_subcommand("rank", "Print the IG/SU feature ranking as CSV");
  add_common(*rank, o);
  rank->add_option("--out", o.out, "Output directory");

  auto* smote = app.add_subcommand("smote", "Write the resampled and filtered dataset as ARFF");
  add_common(*smote, o);
  smote->add_option("--out", o.out, "Output directory");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(o);
    if (*compare) return cmd_compare(o);
    if (*rank) return cmd_rank(o);
    if (*smote) return cmd_smote(o);
    if (*selftest) return run_selftest(std::cout) ? 0 : 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 3;
}
