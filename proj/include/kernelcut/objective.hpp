#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kernelcut/batching.hpp"

namespace kernelcut {

// A sequence of manufacturing batches together with its 0-based position map.
// Both halves are kept so that hand-edited files can be checked for
// consistency; use from_sequence() to build a consistent one.
struct Schedule {
  std::vector<std::string> sequence;
  std::map<std::string, std::size_t> positions;

  static Schedule from_sequence(std::vector<std::string> sequence);
  static Schedule from_indices(std::span<const std::uint32_t> order, const BatchingResult& batching);

  bool operator==(const Schedule&) const = default;
};

struct ObjectiveWeights {
  double alpha = 1.0;
  double beta = 1.0;

  // Throws ConfigError unless alpha >= 0, beta >= 0 and alpha + beta > 0.
  void validate() const;
};

struct FitnessValue {
  std::uint64_t f1 = 0;
  std::uint64_t f2 = 0;
  double combined = 0.0;

  bool operator==(const FitnessValue&) const = default;
};

// Precomputed per-batch attributes for evaluating index permutations quickly.
// Positions in an order are indices into batching.manufacturing_batches.
class ScheduleEvaluator {
 public:
  explicit ScheduleEvaluator(const BatchingResult& batching);

  std::size_t size() const { return thickness_.size(); }

  std::uint64_t f1(std::span<const std::uint32_t> order) const;
  std::uint64_t f2(std::span<const std::uint32_t> order) const;
  FitnessValue evaluate(std::span<const std::uint32_t> order, const ObjectiveWeights& w) const;

 private:
  std::vector<std::size_t> fprb_;
  std::vector<std::int32_t> thickness_;
  std::size_t fprb_count_ = 0;
};

// Maps a schedule to batch indices; throws MalformedSchedule when the schedule
// is not a permutation of the batching's MBs or positions disagree with it.
std::vector<std::uint32_t> resolve_schedule(const Schedule& schedule, const BatchingResult& batching);

// Dispersion: sum over same-FPR-batch pairs of the number of slots between them.
std::uint64_t f1(const Schedule& schedule, const BatchingResult& batching);
// Setups: adjacent pairs with different thickness.
std::uint64_t f2(const Schedule& schedule, const BatchingResult& batching);
FitnessValue fitness(const Schedule& schedule, const BatchingResult& batching,
                     const ObjectiveWeights& weights);

// Number of distinct thicknesses among the batching's MBs.
std::size_t distinct_thickness_count(const BatchingResult& batching);

enum class ConstraintKind {
  UnknownBatch,
  DuplicateBatch,
  MissingBatch,
  PositionOutOfRange,
  PositionGap,
  PositionMismatch,
  BatchCountMismatch,
};

std::string_view to_string(ConstraintKind kind);

struct ConstraintViolation {
  ConstraintKind kind;
  std::string subject;
  std::string message;
};

struct ConstraintReport {
  std::vector<ConstraintViolation> violations;
  // Present only when the schedule is well formed.
  std::optional<std::uint64_t> f1;
  std::optional<std::uint64_t> f2;
  std::size_t fprb_count = 0;
  // Informational: whether setups >= number of FPR batches. Not enforced.
  std::optional<bool> f2_at_least_fprb_count;

  bool ok() const { return violations.empty(); }
};

ConstraintReport check_constraints(const Schedule& schedule, const BatchingResult& batching);

}  // namespace kernelcut
