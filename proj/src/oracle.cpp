#include "kernelcut/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "kernelcut/error.hpp"

namespace kernelcut::oracle {

namespace {

// x[i] = position of batch i; -1 when the schedule does not place it.
std::vector<long long> positions_by_batch(const Schedule& schedule, const BatchingResult& batching) {
  std::vector<long long> x(batching.mb_count(), -1);
  for (std::size_t i = 0; i < batching.mb_count(); ++i) {
    auto it = schedule.positions.find(batching.manufacturing_batches[i].mb_id);
    if (it == schedule.positions.end()) {
      throw Error(ErrorCode::MalformedSchedule,
                  "batch " + batching.manufacturing_batches[i].mb_id + " has no position");
    }
    x[i] = static_cast<long long>(it->second);
  }
  return x;
}

struct DefinitionModel {
  std::vector<std::vector<int>> same_fprb;      // a(i,j)
  std::vector<std::vector<int>> diff_thickness; // e != e'

  explicit DefinitionModel(const BatchingResult& batching) {
    const auto n = batching.mb_count();
    same_fprb.assign(n, std::vector<int>(n, 0));
    diff_thickness.assign(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto& a = batching.manufacturing_batches[i];
        const auto& b = batching.manufacturing_batches[j];
        same_fprb[i][j] = a.fprb_index == b.fprb_index ? 1 : 0;
        diff_thickness[i][j] = a.thickness != b.thickness ? 1 : 0;
      }
    }
  }

  std::uint64_t dispersion(const std::vector<long long>& x) const {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        sum += static_cast<std::uint64_t>(same_fprb[i][j] * std::max(x[j] - x[i] - 1, 0LL));
      }
    }
    return sum;
  }

  std::uint64_t setups(const std::vector<long long>& x) const {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        const int right_after = x[j] == x[i] + 1 ? 1 : 0;
        sum += static_cast<std::uint64_t>(diff_thickness[i][j] * right_after);
      }
    }
    return sum;
  }
};

struct BlockBest {
  std::vector<std::uint32_t> order;  // positions -> batch index
  FitnessValue value;
  std::uint64_t optima = 0;
  std::uint64_t enumerated = 0;
  bool found = false;
};

}  // namespace

std::uint64_t reference_f1(const Schedule& schedule, const BatchingResult& batching) {
  return DefinitionModel(batching).dispersion(positions_by_batch(schedule, batching));
}

std::uint64_t reference_f2(const Schedule& schedule, const BatchingResult& batching) {
  return DefinitionModel(batching).setups(positions_by_batch(schedule, batching));
}

OracleResult exhaustive_best(const BatchingResult& batching, const ObjectiveWeights& weights,
                             std::size_t cap, std::size_t threads) {
  weights.validate();
  const auto n = batching.mb_count();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "no manufacturing batches");
  if (n > cap) {
    std::ostringstream msg;
    msg << "F=" << n << " exceeds the enumeration cap " << cap << " (F! ~ "
        << std::tgamma(static_cast<double>(n) + 1.0) << " permutations)";
    throw Error(ErrorCode::InstanceTooLarge, msg.str());
  }
  const DefinitionModel model(batching);

  // Block b enumerates every order starting with batch b, in lexicographic
  // order, so the first optimum met in the lowest block is the global
  // lexicographic minimum among optima.
  auto run_block = [&](std::uint32_t first) {
    BlockBest best;
    std::vector<std::uint32_t> order(n);
    order[0] = first;
    std::uint32_t next = 0;
    for (std::size_t p = 1; p < n; ++p) {
      if (next == first) ++next;
      order[p] = next++;
    }
    std::vector<long long> x(n);
    do {
      for (std::size_t p = 0; p < n; ++p) x[order[p]] = static_cast<long long>(p);
      FitnessValue v;
      v.f1 = model.dispersion(x);
      v.f2 = model.setups(x);
      v.combined = weights.alpha * static_cast<double>(v.f1) +
                   weights.beta * static_cast<double>(v.f2);
      ++best.enumerated;
      if (!best.found || v.combined < best.value.combined) {
        best.found = true;
        best.value = v;
        best.order = order;
        best.optima = 1;
      } else if (v.combined == best.value.combined) {
        ++best.optima;
      }
    } while (std::next_permutation(order.begin() + 1, order.end()));
    return best;
  };

  std::vector<BlockBest> blocks(n);
  threads = std::clamp<std::size_t>(threads, 1, n);
  if (threads == 1) {
    for (std::uint32_t b = 0; b < n; ++b) blocks[b] = run_block(b);
  } else {
    std::atomic<std::uint32_t> next_block{0};
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (auto b = next_block++; b < n; b = next_block++) blocks[b] = run_block(b);
      });
    }
  }

  OracleResult result;
  const BlockBest* winner = nullptr;
  for (const auto& b : blocks) {
    result.enumerated += b.enumerated;
    if (!winner || b.value.combined < winner->value.combined) winner = &b;
  }
  for (const auto& b : blocks) {
    if (b.value.combined == winner->value.combined) result.optima_count += b.optima;
  }
  result.best_value = winner->value;
  result.best_sequence = Schedule::from_indices(winner->order, batching);
  return result;
}

}  // namespace kernelcut::oracle
