#pragma once

#include <cstddef>
#include <cstdint>

#include "kernelcut/batching.hpp"
#include "kernelcut/objective.hpp"

namespace kernelcut::oracle {

struct OracleResult {
  Schedule best_sequence;
  FitnessValue best_value;
  std::uint64_t optima_count = 0;
  std::uint64_t enumerated = 0;
};

// Definition-level objective evaluation, written directly from the position
// map x: F1 = sum_i sum_j a(i,j) * max(x_j - x_i - 1, 0) and
// F2 = sum_i sum_j y(i,j) with y(i,j) = 1 when j sits right after i at a
// different thickness. Shares no code with ScheduleEvaluator.
std::uint64_t reference_f1(const Schedule& schedule, const BatchingResult& batching);
std::uint64_t reference_f2(const Schedule& schedule, const BatchingResult& batching);

// Enumerates all F! orders. Returns the lexicographically smallest optimum
// (in batch index order). Throws InstanceTooLarge when F > cap.
OracleResult exhaustive_best(const BatchingResult& batching, const ObjectiveWeights& weights,
                             std::size_t cap = 10, std::size_t threads = 1);

}  // namespace kernelcut::oracle
