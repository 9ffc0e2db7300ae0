#pragma once

// Instance generators shared by the unit and acceptance suites.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "kernelcut/batching.hpp"
#include "kernelcut/model.hpp"
#include "kernelcut/objective.hpp"

namespace kernelcut::testing {

inline Kernel make_kernel(std::string id, std::string fpr, int tenths, std::int64_t pieces = 1,
                          bool oversize = false) {
  return {std::move(id), std::move(fpr), Thickness{tenths}, pieces, oversize};
}

// One FPR per FPR batch; group m gets one kernel per listed thickness.
// Batches are given explicitly so the shape is exact.
inline BatchingResult batching_from_shape(const std::vector<std::vector<int>>& groups) {
  std::vector<Kernel> kernels;
  std::vector<FprBatch> fprbs;
  for (std::size_t m = 0; m < groups.size(); ++m) {
    const auto fpr = "P" + std::to_string(m + 1);
    for (std::size_t t = 0; t < groups[m].size(); ++t) {
      kernels.push_back(make_kernel("K" + std::to_string(m + 1) + "_" + std::to_string(t + 1), fpr,
                                    groups[m][t]));
    }
    FprBatch b;
    b.label = batch_label(m);
    b.fpr_ids = {fpr};
    fprbs.push_back(b);
  }
  return build_manufacturing_batches(OrderBook::from_kernels(kernels), fprbs);
}

struct InstanceShape {
  std::size_t min_f = 4, max_f = 8;
  std::size_t min_t = 2, max_t = 4;
  std::size_t min_m = 2, max_m = 4;
};

// Random FPR-batch structure with F manufacturing batches over T thicknesses
// and M FPR batches, every count drawn from the shape's ranges.
template <class Rng>
BatchingResult random_batching(Rng& rng, const InstanceShape& shape = {}) {
  auto draw = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  static constexpr int kPalette[] = {160, 180, 190, 220, 250, 300};
  while (true) {
    const auto m = draw(shape.min_m, shape.max_m);
    const auto t = draw(shape.min_t, shape.max_t);
    const auto f = draw(shape.min_f, shape.max_f);
    if (f < m || f > m * t) continue;
    std::vector<std::size_t> sizes(m, 1);
    for (std::size_t extra = f - m; extra > 0;) {
      auto g = draw(0, m - 1);
      if (sizes[g] < t) {
        ++sizes[g];
        --extra;
      }
    }
    std::vector<int> values(kPalette, kPalette + t);
    std::vector<std::vector<int>> groups;
    std::vector<int> used;
    for (auto s : sizes) {
      std::shuffle(values.begin(), values.end(), rng);
      groups.emplace_back(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(s));
      used.insert(used.end(), groups.back().begin(), groups.back().end());
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    if (used.size() != t) continue;
    return batching_from_shape(groups);
  }
}

template <class Rng>
Schedule random_schedule(Rng& rng, const BatchingResult& batching) {
  std::vector<std::uint32_t> order(batching.mb_count());
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);
  return Schedule::from_indices(order, batching);
}

// Random order book: n_fprs kitchens, each using 1..max_thick of the given
// thickness values, with 1..3 kernels per used thickness.
template <class Rng>
OrderBook random_order_book(Rng& rng, std::size_t n_fprs, const std::vector<int>& thicknesses,
                            std::size_t max_thick = 2) {
  std::vector<Kernel> kernels;
  std::size_t serial = 0;
  for (std::size_t i = 0; i < n_fprs; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "P%03zu", i + 1);
    std::vector<int> pool = thicknesses;
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto used =
        std::uniform_int_distribution<std::size_t>(1, std::min(max_thick, pool.size()))(rng);
    for (std::size_t u = 0; u < used; ++u) {
      const auto count = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int c = 0; c < count; ++c) {
        const auto pieces = std::uniform_int_distribution<int>(1, 12)(rng);
        kernels.push_back(make_kernel("K" + std::to_string(++serial), buf, pool[u], pieces));
      }
    }
  }
  return OrderBook::from_kernels(std::move(kernels));
}

}  // namespace kernelcut::testing
