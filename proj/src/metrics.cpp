#include "kernelcut/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kernelcut/error.hpp"

namespace kernelcut::metrics {

namespace {

std::vector<std::string> schedulable_fpr_ids(const OrderBook& book) {
  std::set<std::string> ids;
  for (const auto& k : book.kernels) {
    if (!k.oversize) ids.insert(k.fpr_id);
  }
  if (ids.empty()) throw Error(ErrorCode::EmptyInput, "order book has no schedulable kernels");
  return {ids.begin(), ids.end()};
}

}  // namespace

const ComparisonRow& ComparisonReport::row(const std::string& policy) const {
  for (const auto& r : rows) {
    if (r.policy == policy) return r;
  }
  throw std::out_of_range("no comparison row for policy " + policy);
}

std::uint64_t setups(const Schedule& schedule, const BatchingResult& batching) {
  return f2(schedule, batching);
}

std::uint64_t max_wip_same_fpr(const Schedule& schedule, const BatchingResult& batching) {
  const auto order = resolve_schedule(schedule, batching);
  struct Span {
    std::size_t first = 0, last = 0, own = 0;
  };
  std::map<std::string, Span> spans;
  for (std::size_t p = 0; p < order.size(); ++p) {
    for (const auto& fpr : batching.manufacturing_batches[order[p]].fpr_ids) {
      auto [it, fresh] = spans.try_emplace(fpr, Span{p, p, 0});
      it->second.last = p;
      ++it->second.own;
    }
  }
  std::uint64_t worst = 0;
  for (const auto& [fpr, fprb] : batching.assignment) {
    auto it = spans.find(fpr);
    if (it == spans.end()) {
      throw Error(ErrorCode::UnscheduledFpr, "FPR " + fpr + " has no scheduled batch");
    }
    const auto& s = it->second;
    // Slots between first and last that carry none of this FPR's kernels.
    worst = std::max<std::uint64_t>(worst, s.last - s.first + 1 - s.own);
  }
  return worst;
}

PalletTimeline simulate_control_step(const Schedule& schedule, const BatchingResult& batching,
                                     std::size_t limit) {
  const auto order = resolve_schedule(schedule, batching);
  const auto m_count = batching.fpr_batches.size();
  std::vector<std::size_t> first(m_count, order.size());
  std::vector<std::size_t> last(m_count, 0);
  for (std::size_t p = 0; p < order.size(); ++p) {
    const auto m = batching.manufacturing_batches[order[p]].fprb_index;
    first[m] = std::min(first[m], p);
    last[m] = std::max(last[m], p);
  }

  PalletTimeline timeline;
  timeline.limit = limit;
  timeline.open.resize(order.size());
  for (std::size_t m = 0; m < m_count; ++m) {
    const auto& fprb = batching.fpr_batches[m];
    for (const auto& fpr : fprb.fpr_ids) {
      if (first[m] == order.size()) {
        throw Error(ErrorCode::UnscheduledFpr, "FPR " + fpr + " has no scheduled batch");
      }
      timeline.pallets.push_back({fpr, fprb.label, first[m], last[m]});
      for (auto p = first[m]; p <= last[m]; ++p) timeline.open[p].push_back(fpr);
    }
  }
  std::stable_sort(timeline.pallets.begin(), timeline.pallets.end(),
                   [](const OpenPallet& a, const OpenPallet& b) { return a.opened_at < b.opened_at; });
  for (std::size_t p = 0; p < timeline.open.size(); ++p) {
    auto& open = timeline.open[p];
    std::sort(open.begin(), open.end());
    timeline.max_open = std::max(timeline.max_open, open.size());
    if (open.size() > limit) timeline.violations.push_back(p);
  }
  return timeline;
}

PolicyPlan baseline_group_by_fpr(const OrderBook& book) {
  std::vector<FprBatch> groups;
  for (const auto& fpr : schedulable_fpr_ids(book)) {
    FprBatch g;
    g.label = batch_label(groups.size());
    g.fpr_ids = {fpr};
    groups.push_back(std::move(g));
  }
  PolicyPlan plan;
  plan.batching = build_manufacturing_batches(book, groups);
  // MBs come out grouped by FPR (fpr_id order) and thickness-ascending within.
  std::vector<std::string> seq;
  for (const auto& mb : plan.batching.manufacturing_batches) seq.push_back(mb.mb_id);
  plan.schedule = Schedule::from_sequence(std::move(seq));
  return plan;
}

PolicyPlan baseline_group_by_thickness(const OrderBook& book) {
  // A single group holding every FPR, so each thickness yields one batch.
  FprBatch all;
  all.label = batch_label(0);
  all.fpr_ids = schedulable_fpr_ids(book);
  PolicyPlan plan;
  plan.batching = build_manufacturing_batches(book, {all});
  std::vector<std::string> seq;
  for (const auto& mb : plan.batching.manufacturing_batches) seq.push_back(mb.mb_id);
  plan.schedule = Schedule::from_sequence(std::move(seq));
  return plan;
}

ComparisonReport compare(const OrderBook& book, const PolicyPlan& proposed, std::size_t limit) {
  auto row_for = [&](std::string name, const PolicyPlan& plan) {
    ComparisonRow row;
    row.policy = std::move(name);
    row.setups = setups(plan.schedule, plan.batching);
    row.max_wip_same_fpr = max_wip_same_fpr(plan.schedule, plan.batching);
    row.max_pallets_open = simulate_control_step(plan.schedule, plan.batching, limit).max_open;
    return row;
  };
  ComparisonReport report;
  report.rows.push_back(row_for("proposed", proposed));
  report.rows.push_back(row_for("group_by_fpr", baseline_group_by_fpr(book)));
  report.rows.push_back(row_for("group_by_thickness", baseline_group_by_thickness(book)));
  return report;
}

}  // namespace kernelcut::metrics
