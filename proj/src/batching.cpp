#include "kernelcut/batching.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_map>

#include "kernelcut/error.hpp"

namespace kernelcut {

namespace {

struct FprProfile {
  std::string fpr_id;
  std::set<Thickness> thicknesses;  // schedulable kernels only
  std::int64_t pieces = 0;
};

// FPRs in fpr_id order, restricted to those with at least one schedulable kernel.
std::vector<FprProfile> schedulable_profiles(const OrderBook& book) {
  std::map<std::string, FprProfile> by_id;
  for (const auto& k : book.kernels) {
    if (k.oversize) continue;
    auto& p = by_id[k.fpr_id];
    p.fpr_id = k.fpr_id;
    p.thicknesses.insert(k.thickness);
    p.pieces += k.piece_count;
  }
  std::vector<FprProfile> out;
  out.reserve(by_id.size());
  for (auto& [id, p] : by_id) out.push_back(std::move(p));
  return out;
}

std::size_t overlap(const std::set<Thickness>& a, const std::set<Thickness>& b) {
  std::size_t n = 0;
  for (const auto& t : a) n += b.count(t);
  return n;
}

}  // namespace

std::string batch_label(std::size_t index) {
  std::string label;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    label.insert(label.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return label;
}

std::size_t BatchingResult::index_of(const std::string& mb_id) const {
  for (std::size_t i = 0; i < manufacturing_batches.size(); ++i) {
    if (manufacturing_batches[i].mb_id == mb_id) return i;
  }
  return manufacturing_batches.size();
}

std::vector<FprBatch> build_fpr_batches(const OrderBook& book, const BatchingConfig& config) {
  if (config.max_fprs < 1) throw Error(ErrorCode::ConfigError, "max_fprs must be >= 1");
  auto profiles = schedulable_profiles(book);
  if (profiles.empty()) {
    throw Error(ErrorCode::EmptyInput, "order book has no schedulable kernels");
  }
  const bool balance = config.size_balance_weight > 0.0;

  std::vector<bool> used(profiles.size(), false);
  std::size_t remaining = profiles.size();
  std::vector<FprBatch> batches;

  while (remaining > 0) {
    // Seed: most thicknesses; profiles are already in fpr_id order.
    std::size_t seed = profiles.size();
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      if (used[i]) continue;
      if (seed == profiles.size() ||
          profiles[i].thicknesses.size() > profiles[seed].thicknesses.size()) {
        seed = i;
      }
    }
    FprBatch batch;
    batch.label = batch_label(batches.size());
    std::set<Thickness> group_thicknesses = profiles[seed].thicknesses;
    batch.fpr_ids.push_back(profiles[seed].fpr_id);
    batch.piece_count = profiles[seed].pieces;
    used[seed] = true;
    --remaining;

    while (batch.fpr_ids.size() < config.max_fprs && remaining > 0) {
      std::size_t best = profiles.size();
      std::size_t best_overlap = 0;
      for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (used[i]) continue;
        const auto shared = overlap(profiles[i].thicknesses, group_thicknesses);
        if (shared == 0) continue;
        if (best == profiles.size() || shared > best_overlap ||
            (shared == best_overlap && balance && profiles[i].pieces < profiles[best].pieces)) {
          best = i;
          best_overlap = shared;
        }
      }
      if (best == profiles.size()) break;
      group_thicknesses.insert(profiles[best].thicknesses.begin(),
                               profiles[best].thicknesses.end());
      batch.fpr_ids.push_back(profiles[best].fpr_id);
      batch.piece_count += profiles[best].pieces;
      used[best] = true;
      --remaining;
    }
    batch.p_m = group_thicknesses.size();
    batches.push_back(std::move(batch));
  }
  return batches;
}

BatchingResult build_manufacturing_batches(const OrderBook& book,
                                           const std::vector<FprBatch>& fpr_batches) {
  BatchingResult result;
  result.fpr_batches = fpr_batches;

  std::unordered_map<std::string, std::size_t> fprb_of;
  for (std::size_t m = 0; m < fpr_batches.size(); ++m) {
    for (const auto& fpr : fpr_batches[m].fpr_ids) {
      fprb_of[fpr] = m;
      result.assignment[fpr] = fpr_batches[m].label;
    }
  }

  // (fprb index, thickness) -> MB under construction
  std::map<std::pair<std::size_t, Thickness>, ManufacturingBatch> mbs;
  std::vector<std::int64_t> pieces(fpr_batches.size(), 0);
  for (const auto& k : book.kernels) {
    if (k.oversize) {
      result.excluded_kernel_ids.push_back(k.kernel_id);
      continue;
    }
    auto it = fprb_of.find(k.fpr_id);
    if (it == fprb_of.end()) {
      throw Error(ErrorCode::UnassignedFpr,
                  "kernel " + k.kernel_id + " belongs to FPR " + k.fpr_id +
                      " which is in no FPR batch");
    }
    auto& mb = mbs[{it->second, k.thickness}];
    mb.fprb_index = it->second;
    mb.thickness = k.thickness;
    mb.kernel_ids.push_back(k.kernel_id);
    if (std::find(mb.fpr_ids.begin(), mb.fpr_ids.end(), k.fpr_id) == mb.fpr_ids.end()) {
      mb.fpr_ids.push_back(k.fpr_id);
    }
    pieces[it->second] += k.piece_count;
  }

  std::vector<std::size_t> next_index(fpr_batches.size(), 1);
  for (auto& [key, mb] : mbs) {
    mb.mb_id = fpr_batches[key.first].label + std::to_string(next_index[key.first]++);
    std::sort(mb.fpr_ids.begin(), mb.fpr_ids.end());
    result.manufacturing_batches.push_back(std::move(mb));
  }
  for (std::size_t m = 0; m < fpr_batches.size(); ++m) {
    result.fpr_batches[m].p_m = next_index[m] - 1;
    result.fpr_batches[m].piece_count = pieces[m];
  }

  if (!fpr_batches.empty()) {
    double mean = 0.0;
    for (auto p : pieces) mean += static_cast<double>(p);
    mean /= static_cast<double>(pieces.size());
    double var = 0.0;
    for (auto p : pieces) var += (static_cast<double>(p) - mean) * (static_cast<double>(p) - mean);
    result.piece_count_stddev = std::sqrt(var / static_cast<double>(pieces.size()));
  }
  return result;
}

BatchingResult batch_orders(const OrderBook& book, const BatchingConfig& config) {
  return build_manufacturing_batches(book, build_fpr_batches(book, config));
}

}  // namespace kernelcut
