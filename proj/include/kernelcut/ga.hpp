#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "kernelcut/batching.hpp"
#include "kernelcut/objective.hpp"

namespace kernelcut::ga {

using Rng = std::mt19937_64;

struct GaConfig {
  std::size_t population_size = 1000;
  double elite_fraction = 0.10;
  std::size_t generations = 200;
  double neighbour_mutation_rate = 0.05;
  double foreign_mutation_rate = 0.05;
  std::uint64_t seed = 0;
  // Generations without improvement of the best fitness before stopping.
  std::optional<std::size_t> stagnation_patience = 50;
  // Worker threads for fitness evaluation. Does not affect results.
  std::size_t evaluation_threads = 1;

  std::size_t elite_count() const;
  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

// Genes are indices into BatchingResult::manufacturing_batches.
struct Individual {
  std::vector<std::uint32_t> genes;
  std::optional<FitnessValue> fitness;

  bool operator==(const Individual&) const = default;
};

enum class TerminationReason {
  MaxGenerations,
  Stagnation,
  // Best fitness equals alpha*0 + beta*(distinct thicknesses - 1), which no
  // schedule can beat.
  LowerBoundReached,
};

std::string_view to_string(TerminationReason reason);

struct GenerationStats {
  double best = 0.0;
  double mean = 0.0;

  bool operator==(const GenerationStats&) const = default;
};

struct GaRunResult {
  Individual best;
  std::vector<GenerationStats> history;
  std::size_t generations_run = 0;
  TerminationReason termination_reason = TerminationReason::MaxGenerations;

  bool operator==(const GaRunResult&) const = default;
};

bool is_permutation_of(std::span<const std::uint32_t> genes, std::size_t n);

std::vector<Individual> init_population(std::size_t mb_count, const GaConfig& config, Rng& rng);

void evaluate_population(std::vector<Individual>& population, const ScheduleEvaluator& evaluator,
                         const ObjectiveWeights& weights, std::size_t threads);

// Total order used for ranking: combined, then f2, then f1, then genes.
bool fitter(const Individual& a, const Individual& b);

// The ceil(elite_fraction * population_size) fittest, ascending.
std::vector<Individual> select(const std::vector<Individual>& population, const GaConfig& config);

// Prefix of parent_a of length `cut`, then parent_b's genes in order, skipping
// those already present.
Individual crossover_at(const Individual& parent_a, const Individual& parent_b, std::size_t cut);
// Same, with the cut drawn uniformly from 1..F-1.
Individual crossover(const Individual& parent_a, const Individual& parent_b, Rng& rng);

// Survivors first, then children. The k-th pair (k = 2, 3, ...) is drawn from
// the best min(k, |survivors|) survivors; the better of the two supplies the
// prefix.
std::vector<Individual> breed(const std::vector<Individual>& survivors, const GaConfig& config,
                              Rng& rng);

Individual mutate_neighbour_at(const Individual& ind, std::size_t position);
Individual mutate_neighbour(const Individual& ind, Rng& rng);
Individual mutate_foreign_at(const Individual& ind, std::size_t first, std::size_t second);
Individual mutate_foreign(const Individual& ind, Rng& rng);

GaRunResult evolve(const BatchingResult& batching, const ObjectiveWeights& weights,
                   const GaConfig& config);

}  // namespace kernelcut::ga
