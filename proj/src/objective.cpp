#include "kernelcut/objective.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "kernelcut/error.hpp"

namespace kernelcut {

Schedule Schedule::from_sequence(std::vector<std::string> sequence) {
  Schedule s;
  for (std::size_t i = 0; i < sequence.size(); ++i) s.positions[sequence[i]] = i;
  s.sequence = std::move(sequence);
  return s;
}

Schedule Schedule::from_indices(std::span<const std::uint32_t> order,
                                const BatchingResult& batching) {
  std::vector<std::string> seq;
  seq.reserve(order.size());
  for (auto i : order) seq.push_back(batching.manufacturing_batches.at(i).mb_id);
  return from_sequence(std::move(seq));
}

void ObjectiveWeights::validate() const {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::ConfigError, "alpha must be >= 0");
  if (!(beta >= 0.0)) throw Error(ErrorCode::ConfigError, "beta must be >= 0");
  if (!(alpha + beta > 0.0)) throw Error(ErrorCode::ConfigError, "alpha + beta must be > 0");
}

ScheduleEvaluator::ScheduleEvaluator(const BatchingResult& batching) {
  for (const auto& mb : batching.manufacturing_batches) {
    fprb_.push_back(mb.fprb_index);
    thickness_.push_back(mb.thickness.tenths);
    fprb_count_ = std::max(fprb_count_, mb.fprb_index + 1);
  }
}

std::uint64_t ScheduleEvaluator::f1(std::span<const std::uint32_t> order) const {
  // Walking the sequence visits each FPR batch's positions in ascending order.
  // For the k-th occurrence at position p, the gaps to the k earlier ones sum
  // to k*p - (sum of earlier positions) - k.
  std::vector<std::uint64_t> seen(fprb_count_, 0);
  std::vector<std::uint64_t> pos_sum(fprb_count_, 0);
  std::uint64_t total = 0;
  for (std::size_t p = 0; p < order.size(); ++p) {
    const auto m = fprb_[order[p]];
    const auto k = seen[m];
    total += k * p - pos_sum[m] - k;
    seen[m] = k + 1;
    pos_sum[m] += p;
  }
  return total;
}

std::uint64_t ScheduleEvaluator::f2(std::span<const std::uint32_t> order) const {
  std::uint64_t setups = 0;
  for (std::size_t p = 1; p < order.size(); ++p) {
    if (thickness_[order[p - 1]] != thickness_[order[p]]) ++setups;
  }
  return setups;
}

FitnessValue ScheduleEvaluator::evaluate(std::span<const std::uint32_t> order,
                                         const ObjectiveWeights& w) const {
  FitnessValue v;
  v.f1 = f1(order);
  v.f2 = f2(order);
  v.combined = w.alpha * static_cast<double>(v.f1) + w.beta * static_cast<double>(v.f2);
  return v;
}

std::vector<std::uint32_t> resolve_schedule(const Schedule& schedule,
                                            const BatchingResult& batching) {
  const auto n = batching.mb_count();
  if (schedule.sequence.size() != n) {
    throw Error(ErrorCode::MalformedSchedule,
                "schedule has " + std::to_string(schedule.sequence.size()) + " entries, expected " +
                    std::to_string(n));
  }
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < n; ++i) index[batching.manufacturing_batches[i].mb_id] = i;

  std::vector<std::uint32_t> order;
  order.reserve(n);
  std::vector<bool> seen(n, false);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& id = schedule.sequence[p];
    auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::MalformedSchedule, "unknown batch " + id);
    if (seen[it->second]) throw Error(ErrorCode::MalformedSchedule, "batch " + id + " repeated");
    seen[it->second] = true;
    auto pos = schedule.positions.find(id);
    if (pos == schedule.positions.end() || pos->second != p) {
      throw Error(ErrorCode::MalformedSchedule,
                  "position map disagrees with sequence at " + id);
    }
    order.push_back(it->second);
  }
  if (schedule.positions.size() != n) {
    throw Error(ErrorCode::MalformedSchedule, "position map has extra entries");
  }
  return order;
}

std::uint64_t f1(const Schedule& schedule, const BatchingResult& batching) {
  return ScheduleEvaluator(batching).f1(resolve_schedule(schedule, batching));
}

std::uint64_t f2(const Schedule& schedule, const BatchingResult& batching) {
  return ScheduleEvaluator(batching).f2(resolve_schedule(schedule, batching));
}

FitnessValue fitness(const Schedule& schedule, const BatchingResult& batching,
                     const ObjectiveWeights& weights) {
  weights.validate();
  return ScheduleEvaluator(batching).evaluate(resolve_schedule(schedule, batching), weights);
}

std::size_t distinct_thickness_count(const BatchingResult& batching) {
  std::set<Thickness> ts;
  for (const auto& mb : batching.manufacturing_batches) ts.insert(mb.thickness);
  return ts.size();
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::UnknownBatch: return "unknown_batch";
    case ConstraintKind::DuplicateBatch: return "duplicate_batch";
    case ConstraintKind::MissingBatch: return "missing_batch";
    case ConstraintKind::PositionOutOfRange: return "position_out_of_range";
    case ConstraintKind::PositionGap: return "position_gap";
    case ConstraintKind::PositionMismatch: return "position_mismatch";
    case ConstraintKind::BatchCountMismatch: return "batch_count_mismatch";
  }
  return "unknown";
}

ConstraintReport check_constraints(const Schedule& schedule, const BatchingResult& batching) {
  ConstraintReport report;
  auto flag = [&](ConstraintKind kind, const std::string& subject, std::string message) {
    report.violations.push_back({kind, subject, std::move(message)});
  };
  const auto n = batching.mb_count();
  report.fprb_count = batching.fpr_batches.size();

  std::set<std::string> known;
  for (const auto& mb : batching.manufacturing_batches) known.insert(mb.mb_id);

  std::map<std::string, std::size_t> occurrences;
  for (const auto& id : schedule.sequence) {
    if (!known.contains(id)) flag(ConstraintKind::UnknownBatch, id, "not a batch of this batching");
    if (++occurrences[id] == 2) flag(ConstraintKind::DuplicateBatch, id, "appears more than once");
  }
  for (const auto& id : known) {
    if (!occurrences.contains(id)) flag(ConstraintKind::MissingBatch, id, "not scheduled");
  }

  // Positions must cover 0..F-1 exactly once and agree with the sequence.
  std::vector<std::size_t> hits(n, 0);
  for (const auto& [id, pos] : schedule.positions) {
    if (pos >= n) {
      flag(ConstraintKind::PositionOutOfRange, id,
           "position " + std::to_string(pos) + " outside 0.." + std::to_string(n ? n - 1 : 0));
      continue;
    }
    ++hits[pos];
    if (pos >= schedule.sequence.size() || schedule.sequence[pos] != id) {
      flag(ConstraintKind::PositionMismatch, id,
           "position " + std::to_string(pos) + " disagrees with the sequence");
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (hits[p] == 0) {
      flag(ConstraintKind::PositionGap, std::to_string(p), "no batch holds this position");
    } else if (hits[p] > 1) {
      flag(ConstraintKind::PositionGap, std::to_string(p), "position held by several batches");
    }
  }
  for (std::size_t p = 0; p < schedule.sequence.size(); ++p) {
    const auto& id = schedule.sequence[p];
    if (!schedule.positions.contains(id)) {
      flag(ConstraintKind::PositionMismatch, id, "scheduled but has no position entry");
    }
  }

  // Each FPR batch must own exactly p_m manufacturing batches.
  std::vector<std::size_t> per_fprb(batching.fpr_batches.size(), 0);
  for (const auto& mb : batching.manufacturing_batches) {
    if (mb.fprb_index >= per_fprb.size()) {
      flag(ConstraintKind::BatchCountMismatch, mb.mb_id, "refers to a missing FPR batch");
      continue;
    }
    ++per_fprb[mb.fprb_index];
  }
  for (std::size_t m = 0; m < per_fprb.size(); ++m) {
    const auto& b = batching.fpr_batches[m];
    if (per_fprb[m] != b.p_m) {
      flag(ConstraintKind::BatchCountMismatch, b.label,
           "declares p_m=" + std::to_string(b.p_m) + " but owns " + std::to_string(per_fprb[m]) +
               " manufacturing batches");
    }
  }

  if (report.ok()) {
    ScheduleEvaluator eval(batching);
    auto order = resolve_schedule(schedule, batching);
    report.f1 = eval.f1(order);
    report.f2 = eval.f2(order);
    report.f2_at_least_fprb_count = *report.f2 >= report.fprb_count;
  }
  return report;
}

}  // namespace kernelcut
