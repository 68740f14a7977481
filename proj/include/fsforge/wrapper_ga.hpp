#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fsforge/classifiers/cross_validation.hpp"
#include "fsforge/dataset.hpp"
#include "fsforge/error.hpp"
#include "fsforge/parallel.hpp"
#include "fsforge/random.hpp"

namespace fsforge {

using Mask = std::vector<std::uint8_t>;

inline std::size_t active_count(const Mask& m) {
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), std::uint8_t{1}));
}

struct Chromosome {
  Mask mask;
  std::optional<double> fitness;  // cleared whenever the mask changes

  std::size_t size() const noexcept { return mask.size(); }
  std::size_t active() const { return active_count(mask); }
};

struct GaParams {
  double crossover_probability = 0.6;
  std::size_t max_generations = 20;
  double mutation_probability = 0.033;
  std::size_t population_size = 20;
  std::size_t elitism = 1;
  std::uint64_t seed = 0;

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(crossover_probability)) throw ConfigError("crossover probability must lie in [0,1]");
    if (!prob(mutation_probability)) throw ConfigError("mutation probability must lie in [0,1]");
    if (population_size < 2) throw ConfigError("population size must be at least 2");
    if (elitism >= population_size) throw ConfigError("elitism must be smaller than the population");
  }
};

/// Rank-ordered ladder: individual i switches on the first
/// ceil((i+1) * n / population_size) candidates (candidates are given in rank
/// order), then every other bit turns on with probability mutation_probability.
inline std::vector<Chromosome> seed_population(std::size_t n_candidates, const GaParams& params) {
  if (n_candidates == 0) throw DataError("cannot seed a population over zero candidates");
  Rng rng(derive_seed(params.seed, "seed_population"));
  std::vector<Chromosome> pop;
  const std::size_t P = params.population_size;
  for (std::size_t i = 0; i < P; ++i) {
    const std::size_t prefix = ((i + 1) * n_candidates + P - 1) / P;
    Chromosome c{Mask(n_candidates, 0), std::nullopt};
    for (std::size_t b = 0; b < n_candidates; ++b) {
      c.mask[b] = b < prefix ? 1 : (rng.bernoulli(params.mutation_probability) ? 1 : 0);
    }
    pop.push_back(std::move(c));
  }
  return pop;
}

// Uniform random masks (each bit on with probability 1/2, never empty).
inline std::vector<Chromosome> random_population(std::size_t n_candidates, const GaParams& params) {
  if (n_candidates == 0) throw DataError("cannot seed a population over zero candidates");
  Rng rng(derive_seed(params.seed, "random_population"));
  std::vector<Chromosome> pop;
  for (std::size_t i = 0; i < params.population_size; ++i) {
    Chromosome c{Mask(n_candidates, 0), std::nullopt};
    for (auto& b : c.mask) b = rng.bernoulli(0.5) ? 1 : 0;
    if (c.active() == 0) c.mask[rng.index(n_candidates)] = 1;
    pop.push_back(std::move(c));
  }
  return pop;
}

/// Fitness-proportionate choice; uniform when every fitness is zero.
inline std::size_t roulette_select(std::span<const Chromosome> population, Rng& rng) {
  if (population.empty()) throw DataError("roulette selection on an empty population");
  double total = 0.0;
  for (const auto& c : population) {
    if (!c.fitness) throw InvariantError("roulette selection on an unevaluated chromosome");
    total += *c.fitness;
  }
  if (total <= 0.0) return rng.index(population.size());
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    acc += *population[i].fitness;
    if (target < acc) return i;
  }
  // Rounding left target at the very top; return the last individual with mass.
  for (std::size_t i = population.size(); i-- > 0;) {
    if (*population[i].fitness > 0.0) return i;
  }
  return population.size() - 1;
}

// Swaps the tails of a and b from position cut onward.
inline std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                                      std::size_t cut) {
  if (a.size() != b.size()) throw DataError("crossover of masks with different lengths");
  if (cut == 0 || cut >= a.size()) throw DataError("crossover cut must lie in [1, n-1]");
  Chromosome c1{a.mask, std::nullopt};
  Chromosome c2{b.mask, std::nullopt};
  for (std::size_t i = cut; i < a.size(); ++i) std::swap(c1.mask[i], c2.mask[i]);
  return {std::move(c1), std::move(c2)};
}

/// Single-point crossover with probability p at a uniform cut in [1, n-1];
/// otherwise the children copy the parents.
inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng,
                                                   double p) {
  if (a.size() != b.size()) throw DataError("crossover of masks with different lengths");
  if (a.size() >= 2 && rng.bernoulli(p)) return crossover_at(a, b, 1 + rng.index(a.size() - 1));
  return {Chromosome{a.mask, std::nullopt}, Chromosome{b.mask, std::nullopt}};
}

inline Chromosome mutate(Chromosome c, Rng& rng, double p) {
  bool changed = false;
  for (auto& bit : c.mask) {
    if (rng.bernoulli(p)) {
      bit ^= 1;
      changed = true;
    }
  }
  if (changed) c.fitness.reset();
  return c;
}

/// Cross-validated Naive Bayes accuracy of a feature subset, with a cache so
/// a mask is only ever evaluated once.
class WrapperFitness {
 public:
  WrapperFitness(const Dataset& d, const FoldPlan& folds, std::vector<std::size_t> candidates)
      : data_(&d), folds_(&folds), candidates_(std::move(candidates)) {}

  // Mean per-fold accuracy over the fold plan, using only the masked candidates.
  double compute(const Mask& mask) const {
    std::vector<std::size_t> features;
    for (std::size_t b = 0; b < mask.size(); ++b) {
      if (mask[b]) features.push_back(candidates_[b]);
    }
    if (features.empty()) return 0.0;
    const Dataset projected = data_->project(features);
    const CvResult cv = cross_validate(ClassifierId::naive_bayes, projected, *folds_);
    std::vector<double> correct(folds_->k, 0.0), total(folds_->k, 0.0);
    for (std::size_t i = 0; i < projected.size(); ++i) {
      const std::size_t f = folds_->assignments[i];
      total[f] += 1.0;
      const auto& p = cv.predictions[i];
      const auto guess = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
      if (guess == projected[i].label) correct[f] += 1.0;
    }
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t f = 0; f < folds_->k; ++f) {
      if (total[f] == 0) continue;
      sum += correct[f] / total[f];
      ++used;
    }
    return used == 0 ? 0.0 : sum / static_cast<double>(used);
  }

  // Fills every missing fitness; distinct uncached masks run in parallel.
  void evaluate(std::vector<Chromosome>& population, std::size_t threads = 1) {
    std::vector<Mask> todo;
    for (const auto& c : population) {
      if (c.fitness || active_count(c.mask) == 0 || cache_.contains(c.mask)) continue;
      if (std::find(todo.begin(), todo.end(), c.mask) == todo.end()) todo.push_back(c.mask);
    }
    std::vector<double> results(todo.size());
    parallel_for(todo.size(), threads, [&](std::size_t i) { results[i] = compute(todo[i]); });
    for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(todo[i], results[i]);
    evaluations_ += todo.size();
    for (auto& c : population) {
      if (c.fitness) continue;
      c.fitness = active_count(c.mask) == 0 ? 0.0 : cache_.at(c.mask);
    }
  }

  double operator()(const Mask& mask) {
    std::vector<Chromosome> one{Chromosome{mask, std::nullopt}};
    evaluate(one);
    return *one.front().fitness;
  }

  std::size_t evaluations() const noexcept { return evaluations_; }
  const std::vector<std::size_t>& candidates() const noexcept { return candidates_; }

 private:
  const Dataset* data_;
  const FoldPlan* folds_;
  std::vector<std::size_t> candidates_;
  std::map<Mask, double> cache_;
  std::size_t evaluations_ = 0;
};

struct GenerationTrace {
  std::size_t generation = 0;
  double best_fitness = 0.0;  // best in this generation
  double mean_fitness = 0.0;
  std::size_t best_mask_size = 0;
  double best_ever = 0.0;
};

struct GaResult {
  std::vector<std::size_t> selected;  // dataset attribute indices, ascending
  Mask best_mask;
  double best_fitness = 0.0;
  std::vector<GenerationTrace> trace;
  std::size_t evaluations = 0;
  std::vector<Chromosome> final_population;
};

enum class PopulationSeeding { rank_ladder, random };

/// Genetic search over subsets of `candidates` (given in rank order) with
/// wrapper fitness. Each generation keeps `elitism` best individuals and fills
/// the rest by roulette selection, single-point crossover and bit-flip
/// mutation. Returns the best mask ever evaluated: highest fitness, then fewest
/// features, then earliest discovery.
inline GaResult evolve(const std::vector<std::size_t>& candidates, const Dataset& d, const FoldPlan& folds,
                       const GaParams& params, std::size_t threads = 1,
                       PopulationSeeding seeding = PopulationSeeding::rank_ladder,
                       std::optional<std::vector<Chromosome>> initial = std::nullopt) {
  params.validate();
  if (candidates.empty()) throw DataError("genetic search needs at least one candidate feature");
  WrapperFitness fitness(d, folds, candidates);
  const std::size_t n = candidates.size();
  std::vector<Chromosome> population;
  if (initial) {
    population = std::move(*initial);
    if (population.size() != params.population_size) {
      throw ConfigError("initial population size does not match population_size");
    }
    for (const auto& c : population) {
      if (c.size() != n) throw DataError("initial chromosome length does not match candidate count");
    }
  } else {
    population = seeding == PopulationSeeding::rank_ladder ? seed_population(n, params)
                                                           : random_population(n, params);
  }
  Rng rng(derive_seed(params.seed, "evolve"));

  GaResult result;
  bool have_best = false;
  auto better = [](double fa, std::size_t sa, double fb, std::size_t sb) {
    return fa > fb || (fa == fb && sa < sb);
  };
  auto record = [&](std::size_t generation) {
    fitness.evaluate(population, threads);
    GenerationTrace t;
    t.generation = generation;
    std::size_t best_i = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < population.size(); ++i) {
      const double f = *population[i].fitness;
      sum += f;
      if (better(f, population[i].active(), *population[best_i].fitness, population[best_i].active())) {
        best_i = i;
      }
      // Strict improvement only, so earlier discoveries keep their place.
      if (population[i].active() > 0 &&
          (!have_best || better(f, population[i].active(), result.best_fitness,
                                active_count(result.best_mask)))) {
        result.best_fitness = f;
        result.best_mask = population[i].mask;
        have_best = true;
      }
    }
    t.best_fitness = *population[best_i].fitness;
    t.best_mask_size = population[best_i].active();
    t.mean_fitness = sum / static_cast<double>(population.size());
    t.best_ever = result.best_fitness;
    result.trace.push_back(t);
  };

  record(0);
  for (std::size_t g = 1; g <= params.max_generations; ++g) {
    std::vector<std::size_t> order(population.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return better(*population[a].fitness, population[a].active(), *population[b].fitness,
                    population[b].active());
    });
    std::vector<Chromosome> next;
    next.reserve(params.population_size);
    for (std::size_t e = 0; e < params.elitism; ++e) next.push_back(population[order[e]]);
    while (next.size() < params.population_size) {
      const Chromosome& a = population[roulette_select(population, rng)];
      const Chromosome& b = population[roulette_select(population, rng)];
      auto [c1, c2] = crossover(a, b, rng, params.crossover_probability);
      c1 = mutate(std::move(c1), rng, params.mutation_probability);
      c2 = mutate(std::move(c2), rng, params.mutation_probability);
      // Unchanged copies keep the parent's fitness; the cache would return it anyway.
      if (c1.mask == a.mask) c1.fitness = a.fitness;
      if (c2.mask == b.mask) c2.fitness = b.fitness;
      next.push_back(std::move(c1));
      if (next.size() < params.population_size) next.push_back(std::move(c2));
    }
    population = std::move(next);
    record(g);
  }

  if (!have_best) {
    // Every individual was empty; fall back to the top-ranked candidate.
    result.best_mask.assign(n, 0);
    result.best_mask[0] = 1;
    result.best_fitness = fitness(result.best_mask);
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (result.best_mask[b]) result.selected.push_back(candidates[b]);
  }
  std::sort(result.selected.begin(), result.selected.end());
  result.evaluations = fitness.evaluations();
  result.final_population = std::move(population);
  return result;
}

}  // namespace fsforge
