#include "kernelcut/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "kernelcut/error.hpp"

namespace kernelcut::ga {

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::MaxGenerations: return "max_generations";
    case TerminationReason::Stagnation: return "stagnation";
    case TerminationReason::LowerBoundReached: return "lower_bound_reached";
  }
  return "unknown";
}

std::size_t GaConfig::elite_count() const {
  // Guard against 0.1 * 1000 landing a hair above 100.
  const double raw = elite_fraction * static_cast<double>(population_size);
  auto n = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::size_t>(n, 1, population_size);
}

void GaConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::ConfigError, what); };
  if (population_size < 2) fail("population_size must be >= 2");
  if (!(elite_fraction > 0.0 && elite_fraction <= 1.0)) fail("elite_fraction must be in (0, 1]");
  if (elite_count() < 2) fail("elite_fraction * population_size must keep >= 2 survivors");
  if (generations < 1) fail("generations must be >= 1");
  if (!(neighbour_mutation_rate >= 0.0 && neighbour_mutation_rate <= 1.0)) {
    fail("neighbour_mutation_rate must be in [0, 1]");
  }
  if (!(foreign_mutation_rate >= 0.0 && foreign_mutation_rate <= 1.0)) {
    fail("foreign_mutation_rate must be in [0, 1]");
  }
  if (stagnation_patience && *stagnation_patience < 1) fail("stagnation_patience must be >= 1");
  if (evaluation_threads < 1) fail("evaluation_threads must be >= 1");
}

bool is_permutation_of(std::span<const std::uint32_t> genes, std::size_t n) {
  if (genes.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto g : genes) {
    if (g >= n || seen[g]) return false;
    seen[g] = true;
  }
  return true;
}

std::vector<Individual> init_population(std::size_t mb_count, const GaConfig& config, Rng& rng) {
  if (mb_count == 0) throw Error(ErrorCode::EmptyInput, "no manufacturing batches to schedule");
  std::vector<std::uint32_t> identity(mb_count);
  std::iota(identity.begin(), identity.end(), 0u);
  std::vector<Individual> population(config.population_size);
  for (auto& ind : population) {
    ind.genes = identity;
    std::shuffle(ind.genes.begin(), ind.genes.end(), rng);
  }
  return population;
}

void evaluate_population(std::vector<Individual>& population, const ScheduleEvaluator& evaluator,
                         const ObjectiveWeights& weights, std::size_t threads) {
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto& ind = population[i];
      if (!ind.fitness) ind.fitness = evaluator.evaluate(ind.genes, weights);
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(population.size(), 1));
  if (threads == 1) {
    work(0, population.size());
    return;
  }
  const std::size_t chunk = (population.size() + threads - 1) / threads;
  std::vector<std::jthread> workers;
  for (std::size_t t = 0; t < threads; ++t) {
    const auto begin = std::min(population.size(), t * chunk);
    const auto end = std::min(population.size(), begin + chunk);
    if (begin < end) workers.emplace_back(work, begin, end);
  }
}

bool fitter(const Individual& a, const Individual& b) {
  const auto& fa = *a.fitness;
  const auto& fb = *b.fitness;
  if (fa.combined != fb.combined) return fa.combined < fb.combined;
  if (fa.f2 != fb.f2) return fa.f2 < fb.f2;
  if (fa.f1 != fb.f1) return fa.f1 < fb.f1;
  return a.genes < b.genes;
}

std::vector<Individual> select(const std::vector<Individual>& population, const GaConfig& config) {
  for (const auto& ind : population) {
    if (!ind.fitness) throw Error(ErrorCode::NotEvaluated, "population has unevaluated members");
  }
  const auto keep = std::min(config.elite_count(), population.size());
  std::vector<const Individual*> ranked;
  ranked.reserve(population.size());
  for (const auto& ind : population) ranked.push_back(&ind);
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                    ranked.end(), [](const Individual* a, const Individual* b) {
                      return fitter(*a, *b);
                    });
  std::vector<Individual> survivors;
  survivors.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) survivors.push_back(*ranked[i]);
  return survivors;
}

Individual crossover_at(const Individual& parent_a, const Individual& parent_b, std::size_t cut) {
  const auto n = parent_a.genes.size();
  if (parent_b.genes.size() != n || !is_permutation_of(parent_a.genes, n) ||
      !is_permutation_of(parent_b.genes, n)) {
    throw Error(ErrorCode::IncompatibleParents, "parents are not permutations of the same batches");
  }
  cut = std::min(cut, n);
  Individual child;
  child.genes.reserve(n);
  std::vector<bool> taken(n, false);
  for (std::size_t i = 0; i < cut; ++i) {
    child.genes.push_back(parent_a.genes[i]);
    taken[parent_a.genes[i]] = true;
  }
  // Duplicate genes are aborted, never copied twice.
  for (auto g : parent_b.genes) {
    if (!taken[g]) {
      child.genes.push_back(g);
      taken[g] = true;
    }
  }
  return child;
}

Individual crossover(const Individual& parent_a, const Individual& parent_b, Rng& rng) {
  const auto n = parent_a.genes.size();
  std::size_t cut = n;
  if (n >= 2) cut = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
  return crossover_at(parent_a, parent_b, cut);
}

std::vector<Individual> breed(const std::vector<Individual>& survivors, const GaConfig& config,
                              Rng& rng) {
  if (survivors.size() < 2) {
    throw Error(ErrorCode::InsufficientSurvivors, "breeding needs at least two survivors");
  }
  std::vector<Individual> next;
  next.reserve(config.population_size);
  for (const auto& s : survivors) {
    if (next.size() == config.population_size) break;
    next.push_back(s);
  }
  std::size_t window = 2;
  while (next.size() < config.population_size) {
    const auto width = std::min(window, survivors.size());
    auto first = std::uniform_int_distribution<std::size_t>(0, width - 1)(rng);
    auto second = std::uniform_int_distribution<std::size_t>(0, width - 2)(rng);
    if (second >= first) ++second;
    if (second < first) std::swap(first, second);
    next.push_back(crossover(survivors[first], survivors[second], rng));
    ++window;
  }
  return next;
}

Individual mutate_neighbour_at(const Individual& ind, std::size_t position) {
  Individual out{ind.genes, std::nullopt};
  if (out.genes.size() < 2) return ind;
  position = std::min(position, out.genes.size() - 2);
  std::swap(out.genes[position], out.genes[position + 1]);
  return out;
}

Individual mutate_neighbour(const Individual& ind, Rng& rng) {
  if (ind.genes.size() < 2) return ind;
  return mutate_neighbour_at(
      ind, std::uniform_int_distribution<std::size_t>(0, ind.genes.size() - 2)(rng));
}

Individual mutate_foreign_at(const Individual& ind, std::size_t first, std::size_t second) {
  Individual out{ind.genes, std::nullopt};
  if (out.genes.size() < 2 || first == second) return ind;
  std::swap(out.genes.at(first), out.genes.at(second));
  return out;
}

Individual mutate_foreign(const Individual& ind, Rng& rng) {
  const auto n = ind.genes.size();
  if (n < 2) return ind;
  if (n < 3) return mutate_foreign_at(ind, 0, 1);
  // Rejection sampling keeps the draw uniform over non-adjacent pairs.
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (true) {
    const auto i = pick(rng);
    const auto j = pick(rng);
    const auto gap = i > j ? i - j : j - i;
    if (gap >= 2) return mutate_foreign_at(ind, i, j);
  }
}

GaRunResult evolve(const BatchingResult& batching, const ObjectiveWeights& weights,
                   const GaConfig& config) {
  config.validate();
  weights.validate();
  const ScheduleEvaluator evaluator(batching);
  Rng rng(config.seed);

  auto population = init_population(batching.mb_count(), config, rng);
  evaluate_population(population, evaluator, weights, config.evaluation_threads);

  const double lower_bound =
      weights.beta * static_cast<double>(distinct_thickness_count(batching) - 1);

  GaRunResult result;
  auto record = [&](const std::vector<Individual>& pop) {
    const Individual* best = &pop.front();
    double sum = 0.0;
    for (const auto& ind : pop) {
      if (fitter(ind, *best)) best = &ind;
      sum += ind.fitness->combined;
    }
    result.history.push_back({best->fitness->combined, sum / static_cast<double>(pop.size())});
    ++result.generations_run;
    return *best;
  };

  result.best = record(population);
  std::size_t stale = 0;
  while (true) {
    if (result.best.fitness->combined <= lower_bound) {
      result.termination_reason = TerminationReason::LowerBoundReached;
      break;
    }
    if (result.generations_run >= config.generations) {
      result.termination_reason = TerminationReason::MaxGenerations;
      break;
    }
    if (config.stagnation_patience && stale >= *config.stagnation_patience) {
      result.termination_reason = TerminationReason::Stagnation;
      break;
    }

    auto survivors = select(population, config);
    population = breed(survivors, config, rng);
    for (std::size_t i = survivors.size(); i < population.size(); ++i) {
      auto& child = population[i];
      if (std::bernoulli_distribution(config.neighbour_mutation_rate)(rng)) {
        child = mutate_neighbour(child, rng);
      }
      if (std::bernoulli_distribution(config.foreign_mutation_rate)(rng)) {
        child = mutate_foreign(child, rng);
      }
    }
    evaluate_population(population, evaluator, weights, config.evaluation_threads);

    auto best = record(population);
    if (fitter(best, result.best) &&
        best.fitness->combined < result.best.fitness->combined) {
      stale = 0;
    } else {
      ++stale;
    }
    if (fitter(best, result.best)) result.best = std::move(best);
  }
  return result;
}

}  // namespace kernelcut::ga
