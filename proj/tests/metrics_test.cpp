#include "kernelcut/metrics.hpp"

#include <gtest/gtest.h>

#include "kernelcut/error.hpp"
#include "support/instances.hpp"

namespace kernelcut::metrics {
namespace {

using testing::make_kernel;

Schedule seq(std::vector<std::string> ids) { return Schedule::from_sequence(std::move(ids)); }

// Two FPR batches A{P1,P2}, B{P3,P4}, each FPR at thicknesses 18 and 22.
BatchingResult two_groups() {
  std::vector<Kernel> ks;
  int serial = 0;
  for (auto fpr : {"P1", "P2", "P3", "P4"}) {
    ks.push_back(make_kernel("K" + std::to_string(++serial), fpr, 180));
    ks.push_back(make_kernel("K" + std::to_string(++serial), fpr, 220));
  }
  return build_manufacturing_batches(OrderBook::from_kernels(ks),
                                     {{"A", {"P1", "P2"}, 0, 0}, {"B", {"P3", "P4"}, 0, 0}});
}

TEST(MaxWipTest, SingleBatchFpr) {
  auto b = testing::batching_from_shape({{180}, {220}});
  EXPECT_EQ(max_wip_same_fpr(seq({"A1", "B1"}), b), 0u);
}

TEST(MaxWipTest, SpreadFpr) {
  auto b = testing::batching_from_shape({{180, 220}, {300}});
  EXPECT_EQ(max_wip_same_fpr(seq({"A1", "B1", "A2"}), b), 1u);
  EXPECT_EQ(max_wip_same_fpr(seq({"A1", "A2", "B1"}), b), 0u);
}

TEST(MaxWipTest, ContiguousGroupsBoundedByGroupSize) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto book = testing::random_order_book(rng, 12, {160, 180, 220, 250, 300}, 4);
    auto b = batch_orders(book, {});
    // Group-contiguous schedule with a random order inside each group.
    std::vector<std::uint32_t> order;
    std::size_t largest = 0;
    for (std::size_t m = 0; m < b.fpr_batches.size(); ++m) {
      std::vector<std::uint32_t> group;
      for (std::uint32_t i = 0; i < b.mb_count(); ++i) {
        if (b.manufacturing_batches[i].fprb_index == m) group.push_back(i);
      }
      std::shuffle(group.begin(), group.end(), rng);
      largest = std::max(largest, group.size());
      order.insert(order.end(), group.begin(), group.end());
    }
    EXPECT_LT(max_wip_same_fpr(Schedule::from_indices(order, b), b), largest);
  }
}

TEST(MaxWipTest, UnscheduledFpr) {
  auto b = testing::batching_from_shape({{180}});
  b.assignment["GHOST"] = "A";
  try {
    max_wip_same_fpr(seq({"A1"}), b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnscheduledFpr);
  }
}

TEST(ControlStepTest, SingleGroupAllOpenTogether) {
  std::vector<Kernel> ks = {make_kernel("K1", "P1", 180), make_kernel("K2", "P2", 220),
                            make_kernel("K3", "P3", 180)};
  auto b = build_manufacturing_batches(OrderBook::from_kernels(ks), {{"A", {"P1", "P2", "P3"}, 0, 0}});
  auto t = simulate_control_step(seq({"A1", "A2"}), b, 7);
  EXPECT_EQ(t.max_open, 3u);
  EXPECT_TRUE(t.violations.empty());
  EXPECT_EQ(t.pallets.size(), 3u);
}

TEST(ControlStepTest, SequentialVersusInterleaved) {
  auto b = two_groups();
  auto sequential = simulate_control_step(seq({"A1", "A2", "B1", "B2"}), b, 7);
  EXPECT_EQ(sequential.max_open, 2u);
  EXPECT_EQ(sequential.open[1], (std::vector<std::string>{"P1", "P2"}));
  EXPECT_EQ(sequential.open[2], (std::vector<std::string>{"P3", "P4"}));

  auto interleaved = simulate_control_step(seq({"A1", "B1", "A2", "B2"}), b, 3);
  EXPECT_EQ(interleaved.max_open, 4u);
  EXPECT_EQ(interleaved.violations, (std::vector<std::size_t>{1, 2}));
}

TEST(ControlStepTest, OpenCountBounds) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto book = testing::random_order_book(rng, 15, {160, 180, 220, 250}, 3);
    auto b = batch_orders(book, {});
    auto s = testing::random_schedule(rng, b);
    auto t = simulate_control_step(s, b);
    EXPECT_LE(t.max_open, b.assignment.size());
    // With every group spanning the whole sequence all pallets are open at once.
    bool all_span = true;
    for (std::size_t m = 0; m < b.fpr_batches.size(); ++m) {
      std::size_t first = b.mb_count(), last = 0;
      for (std::size_t p = 0; p < s.sequence.size(); ++p) {
        if (b.manufacturing_batches[b.index_of(s.sequence[p])].fprb_index == m) {
          first = std::min(first, p);
          last = std::max(last, p);
        }
      }
      all_span &= first == 0 && last + 1 == s.sequence.size();
    }
    if (all_span) EXPECT_EQ(t.max_open, b.assignment.size());
  }
}

TEST(BaselineTest, GroupByFpr) {
  auto book = OrderBook::from_kernels({make_kernel("K1", "P2", 220), make_kernel("K2", "P1", 220),
                                       make_kernel("K3", "P1", 180), make_kernel("K4", "P2", 180)});
  auto plan = baseline_group_by_fpr(book);
  ASSERT_EQ(plan.schedule.sequence.size(), 4u);
  std::vector<std::pair<std::string, int>> got;
  for (const auto& id : plan.schedule.sequence) {
    const auto& mb = plan.batching.manufacturing_batches[plan.batching.index_of(id)];
    got.emplace_back(mb.fpr_ids.front(), mb.thickness.tenths);
  }
  EXPECT_EQ(got, (std::vector<std::pair<std::string, int>>{
                     {"P1", 180}, {"P1", 220}, {"P2", 180}, {"P2", 220}}));
  EXPECT_EQ(max_wip_same_fpr(plan.schedule, plan.batching), 0u);
  EXPECT_EQ(setups(plan.schedule, plan.batching), 3u);
}

TEST(BaselineTest, GroupByThickness) {
  auto book = OrderBook::from_kernels({make_kernel("K1", "P1", 180), make_kernel("K2", "P1", 300),
                                       make_kernel("K3", "P2", 220), make_kernel("K4", "P3", 250),
                                       make_kernel("K5", "P2", 250)});
  auto plan = baseline_group_by_thickness(book);
  EXPECT_EQ(plan.schedule.sequence.size(), 4u);
  EXPECT_EQ(setups(plan.schedule, plan.batching), 3u);
  EXPECT_EQ(max_wip_same_fpr(plan.schedule, plan.batching), 2u);
  EXPECT_THROW(baseline_group_by_thickness(OrderBook{}), Error);
  EXPECT_THROW(baseline_group_by_fpr(OrderBook{}), Error);
}

TEST(BaselineTest, ThicknessGroupingAttainsSetupBound) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    auto book = testing::random_order_book(rng, 20, {160, 180, 190, 220, 250, 300}, 3);
    auto plan = baseline_group_by_thickness(book);
    EXPECT_EQ(setups(plan.schedule, plan.batching), distinct_thickness_count(plan.batching) - 1);
  }
}

TEST(CompareTest, RowsAndDefinitions) {
  std::mt19937_64 rng(31);
  auto book = testing::random_order_book(rng, 10, {160, 180, 220, 250}, 3);
  auto b = batch_orders(book, {});
  PolicyPlan proposed{b, testing::random_schedule(rng, b)};
  auto report = compare(book, proposed);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].policy, "proposed");
  EXPECT_EQ(report.row("proposed").setups, f2(proposed.schedule, b));
  EXPECT_EQ(report.row("group_by_fpr").max_wip_same_fpr, 0u);
  const auto thick = report.row("group_by_thickness").setups;
  EXPECT_LE(thick, report.row("proposed").setups);
  EXPECT_LE(thick, report.row("group_by_fpr").setups);
  EXPECT_THROW(report.row("nope"), std::out_of_range);
}

}  // namespace
}  // namespace kernelcut::metrics
