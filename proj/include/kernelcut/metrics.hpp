#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kernelcut/batching.hpp"
#include "kernelcut/objective.hpp"

namespace kernelcut::metrics {

inline constexpr std::size_t kDefaultPalletLimit = 7;

struct OpenPallet {
  std::string fpr_id;
  std::string fprb_label;
  std::size_t opened_at = 0;
  std::size_t closed_after = 0;

  bool operator==(const OpenPallet&) const = default;
};

struct PalletTimeline {
  std::vector<std::vector<std::string>> open;  // per position, sorted FPR ids
  std::vector<OpenPallet> pallets;             // one per FPR, by opening position
  std::size_t max_open = 0;
  std::size_t limit = kDefaultPalletLimit;
  std::vector<std::size_t> violations;         // positions with more than limit open

  bool operator==(const PalletTimeline&) const = default;
};

struct PolicyPlan {
  BatchingResult batching;
  Schedule schedule;
};

struct ComparisonRow {
  std::string policy;
  std::uint64_t setups = 0;
  std::uint64_t max_wip_same_fpr = 0;
  std::size_t max_pallets_open = 0;

  bool operator==(const ComparisonRow&) const = default;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  // proposed, group_by_fpr, group_by_thickness

  const ComparisonRow& row(const std::string& policy) const;
  bool operator==(const ComparisonReport&) const = default;
};

// Same definition as the objective's setup count.
std::uint64_t setups(const Schedule& schedule, const BatchingResult& batching);

// Largest number of other batches cut between the first and last batch
// carrying one FPR's kernels.
std::uint64_t max_wip_same_fpr(const Schedule& schedule, const BatchingResult& batching);

// Each FPR's pallet is open from the first to the last position of its FPR
// batch's manufacturing batches, inclusive.
PalletTimeline simulate_control_step(const Schedule& schedule, const BatchingResult& batching,
                                     std::size_t limit = kDefaultPalletLimit);

PolicyPlan baseline_group_by_fpr(const OrderBook& book);
PolicyPlan baseline_group_by_thickness(const OrderBook& book);

ComparisonReport compare(const OrderBook& book, const PolicyPlan& proposed,
                         std::size_t limit = kDefaultPalletLimit);

}  // namespace kernelcut::metrics
