#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kernelcut/model.hpp"

namespace kernelcut {

struct BatchingConfig {
  std::size_t max_fprs = 5;
  // Weight of the piece-count tie-break when growing a group; 0 disables it.
  double size_balance_weight = 1.0;
};

// Level-1 cluster: up to max_fprs FPRs chosen for shared thicknesses.
struct FprBatch {
  std::string label;
  std::vector<std::string> fpr_ids;  // in the order they joined the group
  std::size_t p_m = 0;               // number of manufacturing batches
  std::int64_t piece_count = 0;

  bool operator==(const FprBatch&) const = default;
};

// Level-2 cluster: every kernel of one FPR batch at one thickness.
struct ManufacturingBatch {
  std::string mb_id;
  std::size_t fprb_index = 0;
  Thickness thickness;
  std::vector<std::string> kernel_ids;
  std::vector<std::string> fpr_ids;  // FPRs with at least one kernel here, sorted

  bool operator==(const ManufacturingBatch&) const = default;
};

struct BatchingResult {
  std::vector<FprBatch> fpr_batches;
  std::vector<ManufacturingBatch> manufacturing_batches;
  std::map<std::string, std::string> assignment;  // fpr_id -> FPR batch label
  std::vector<std::string> excluded_kernel_ids;   // oversize, cut elsewhere
  // Population standard deviation of FPR batch piece counts.
  double piece_count_stddev = 0.0;

  std::size_t mb_count() const { return manufacturing_batches.size(); }
  // Index into manufacturing_batches, or mb_count() when absent.
  std::size_t index_of(const std::string& mb_id) const;

  bool operator==(const BatchingResult&) const = default;
};

// 0 -> "A", 25 -> "Z", 26 -> "AA", 27 -> "AB", ...
std::string batch_label(std::size_t index);

// Greedy level-1 grouping. Seeds each group with the unassigned FPR having the
// most thicknesses, then adds the candidate maximising (shared thicknesses,
// then smallest resulting piece count, then fpr_id) until the cap is reached
// or no candidate shares a thickness.
std::vector<FprBatch> build_fpr_batches(const OrderBook& book, const BatchingConfig& config);

BatchingResult build_manufacturing_batches(const OrderBook& book,
                                           const std::vector<FprBatch>& fpr_batches);

BatchingResult batch_orders(const OrderBook& book, const BatchingConfig& config);

}  // namespace kernelcut
