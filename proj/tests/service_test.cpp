#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "httplib.h"
#include "kernelcut/config.hpp"
#include "kernelcut/metrics.hpp"
#include "kernelcut/pipeline.hpp"
#include "kernelcut/service.hpp"
#include "support/instances.hpp"

using namespace kernelcut;
using namespace kernelcut::service;
using nlohmann::json;

namespace {

RunArtifacts sample_run() {
  config::ConfigSources s;
  s.flags = {{"population_size", "40"}, {"generations", "10"}, {"seed", "5"}};
  std::mt19937_64 rng(4);
  const auto book = kernelcut::testing::random_order_book(rng, 7, {160, 180, 220}, 2);
  return run_pipeline(book, config::resolve_config(s), "20260101T000000Z");
}

std::filesystem::path temp_log(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("kernelcut_" + name + ".jsonl");
  std::filesystem::remove(p);
  return p;
}

ControlService::Clock fixed_clock() {
  auto n = std::make_shared<int>(0);
  return [n] { return "2026-01-01T00:00:" + std::to_string(10 + (*n)++) + "Z"; };
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    run = sample_run();
    base = "/runs/" + run.run_id;
  }

  HttpResponse set_state(ControlService& svc, const std::string& mb, const std::string& state) {
    return svc.handle("POST", base + "/batches/" + mb + "/status", json{{"state", state}}.dump());
  }

  RunArtifacts run;
  std::string base;
};

}  // namespace

TEST(BatchStateTest, OnlyNextStepIsLegal) {
  const BatchState all[] = {BatchState::Pending, BatchState::Cut, BatchState::AtControl, BatchState::Sorted};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) EXPECT_EQ(is_legal_transition(all[a], all[b]), b == a + 1);
    EXPECT_EQ(batch_state_from_string(to_string(all[a])), all[a]);
  }
  EXPECT_FALSE(batch_state_from_string("done").has_value());
}

TEST_F(ServiceTest, EveryResponseCarriesRunIdAndConfigDigest) {
  ControlService svc({run});
  const auto mb = run.schedule.sequence.front();
  for (auto [method, path, body] : std::vector<std::tuple<std::string, std::string, std::string>>{
           {"GET", base + "/schedule", ""},
           {"GET", base + "/pallets", ""},
           {"GET", base + "/report", ""},
           {"POST", base + "/batches/" + mb + "/status", R"({"state":"sorted"})"},
           {"POST", base + "/batches/" + mb + "/status", "nope"},
           {"POST", base + "/whatif", json{{"sequence", run.schedule.sequence}}.dump()},
           {"POST", base + "/whatif", R"({"sequence":["X"]})"}}) {
    const auto r = svc.handle(method, path, body);
    const auto j = json::parse(r.body);
    EXPECT_EQ(j.at("run_id"), run.run_id) << path;
    EXPECT_EQ(j.at("config_digest"), run.config_digest) << path;
  }
  const auto list = json::parse(svc.handle("GET", "/runs").body);
  ASSERT_EQ(list["runs"].size(), 1u);
  EXPECT_EQ(list["runs"][0]["run_id"], run.run_id);
  EXPECT_EQ(list["runs"][0]["config_digest"], run.config_digest);
}

TEST_F(ServiceTest, ScheduleListsSequenceWithStatuses) {
  ControlService svc({run}, std::nullopt, fixed_clock());
  const auto first = run.schedule.sequence.front();
  ASSERT_EQ(set_state(svc, first, "cut").status, 200);
  const auto r = svc.handle("GET", base + "/schedule");
  ASSERT_EQ(r.status, 200);
  const auto j = json::parse(r.body);
  ASSERT_EQ(j["sequence"].size(), run.schedule.sequence.size());
  for (std::size_t p = 0; p < run.schedule.sequence.size(); ++p) {
    EXPECT_EQ(j["sequence"][p]["position"], p);
    EXPECT_EQ(j["sequence"][p]["mb_id"], run.schedule.sequence[p]);
    EXPECT_EQ(j["sequence"][p]["state"], p == 0 ? "cut" : "pending");
  }
}

TEST_F(ServiceTest, TransitionsMoveOneStepForward) {
  ControlService svc({run}, std::nullopt, fixed_clock());
  const auto mb = run.schedule.sequence.front();
  EXPECT_EQ(set_state(svc, mb, "sorted").status, 409);
  EXPECT_EQ(set_state(svc, mb, "at_control").status, 409);
  EXPECT_EQ(set_state(svc, mb, "pending").status, 409);
  EXPECT_EQ(set_state(svc, mb, "cut").status, 200);
  EXPECT_EQ(set_state(svc, mb, "cut").status, 409);
  EXPECT_EQ(set_state(svc, mb, "at_control").status, 200);
  EXPECT_EQ(set_state(svc, mb, "cut").status, 409);
  EXPECT_EQ(set_state(svc, mb, "sorted").status, 200);
  EXPECT_EQ(svc.status(run.run_id, mb).state, BatchState::Sorted);
}

TEST_F(ServiceTest, ErrorStatuses) {
  ControlService svc({run});
  const auto mb = run.schedule.sequence.front();
  EXPECT_EQ(svc.handle("GET", "/runs/unknown/schedule").status, 404);
  EXPECT_EQ(svc.handle("POST", "/runs/unknown/whatif", "{}").status, 404);
  EXPECT_EQ(svc.handle("GET", base + "/nothing").status, 404);
  EXPECT_EQ(set_state(svc, "ZZ9", "cut").status, 404);
  EXPECT_EQ(svc.handle("POST", base + "/batches/" + mb + "/status", "{").status, 400);
  EXPECT_EQ(svc.handle("POST", base + "/batches/" + mb + "/status", R"({"note":"x"})").status, 400);
  EXPECT_EQ(set_state(svc, mb, "finished").status, 400);
  EXPECT_EQ(svc.handle("POST", base + "/whatif", R"({"order":[]})").status, 400);
  EXPECT_EQ(svc.handle("GET", base + "/report", "", {{"format", "pdf"}}).status, 400);
}

TEST_F(ServiceTest, WhatIfMatchesRecomputationAndLeavesArtifactsAlone) {
  ControlService svc({run});
  const auto before = artifacts_digest(*svc.find_run(run.run_id));
  ASSERT_GE(run.schedule.sequence.size(), 2u);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto seq = run.schedule.sequence;
    std::uniform_int_distribution<std::size_t> pick(0, seq.size() - 1);
    std::swap(seq[pick(rng)], seq[pick(rng)]);
    const auto r = svc.handle("POST", base + "/whatif", json{{"sequence", seq}}.dump());
    ASSERT_EQ(r.status, 200) << r.body;
    const auto j = json::parse(r.body);
    const auto hyp = Schedule::from_sequence(seq);
    const auto expect = fitness(hyp, run.batching, run.weights);
    const auto timeline = metrics::simulate_control_step(hyp, run.batching, run.timeline.limit);
    EXPECT_EQ(j["f1"].get<std::int64_t>(), static_cast<std::int64_t>(expect.f1));
    EXPECT_EQ(j["f2"].get<std::int64_t>(), static_cast<std::int64_t>(expect.f2));
    EXPECT_DOUBLE_EQ(j["combined"].get<double>(), expect.combined);
    EXPECT_EQ(j["max_open"].get<std::size_t>(), timeline.max_open);
    EXPECT_DOUBLE_EQ(j["delta"]["combined"].get<double>(), expect.combined - run.fitness.combined);
  }
  auto bad = run.schedule.sequence;
  bad.back() = bad.front();
  EXPECT_EQ(svc.handle("POST", base + "/whatif", json{{"sequence", bad}}.dump()).status, 400);
  bad.pop_back();
  EXPECT_EQ(svc.handle("POST", base + "/whatif", json{{"sequence", bad}}.dump()).status, 400);

  EXPECT_EQ(artifacts_digest(*svc.find_run(run.run_id)), before);
  const auto sched = json::parse(svc.handle("GET", base + "/schedule").body);
  for (std::size_t p = 0; p < run.schedule.sequence.size(); ++p) {
    EXPECT_EQ(sched["sequence"][p]["mb_id"], run.schedule.sequence[p]);
  }
}

TEST_F(ServiceTest, EventLogReplayRebuildsStatuses) {
  const auto path = temp_log("replay");
  std::map<std::string, BatchStatus> live;
  {
    ControlService svc({run}, path, fixed_clock());
    std::mt19937_64 rng(8);
    const char* names[] = {"pending", "cut", "at_control", "sorted"};
    for (int step = 0; step < 60; ++step) {
      const auto& mb = run.schedule.sequence[rng() % run.schedule.sequence.size()];
      set_state(svc, mb, names[rng() % 4]);
    }
    for (const auto& mb : run.schedule.sequence) live[mb] = svc.status(run.run_id, mb);
  }
  const auto replayed = replay(EventLog(path).read());
  ControlService restarted({run}, path);
  for (const auto& mb : run.schedule.sequence) {
    const auto& expect = live.at(mb);
    EXPECT_EQ(restarted.status(run.run_id, mb), expect) << mb;
    if (expect.state == BatchState::Pending) {
      EXPECT_FALSE(replayed.count(run.run_id) && replayed.at(run.run_id).count(mb));
    } else {
      EXPECT_EQ(replayed.at(run.run_id).at(mb), expect);
    }
  }
}

TEST_F(ServiceTest, EventLogIsAppendOnlyJsonLines) {
  const auto path = temp_log("lines");
  ControlService svc({run}, path, fixed_clock());
  const auto mb = run.schedule.sequence.front();
  set_state(svc, mb, "cut");
  set_state(svc, mb, "sorted");
  svc.handle("POST", base + "/batches/" + mb + "/status", R"({"state":"at_control","note":"check edge"})");
  std::ifstream in(path);
  std::vector<json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(json::parse(line));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0]["state"], "cut");
  EXPECT_EQ(lines[1]["state"], "at_control");
  EXPECT_EQ(lines[1]["note"], "check edge");
  EXPECT_EQ(lines[1]["run_id"], run.run_id);
}

TEST(ReplayTest, SkipsIllegalEvents) {
  const std::vector<StatusEvent> events = {
      {"r", "A1", BatchState::Cut, "t1", std::nullopt},
      {"r", "A1", BatchState::Sorted, "t2", std::nullopt},
      {"r", "A2", BatchState::AtControl, "t3", std::nullopt},
      {"r", "A1", BatchState::AtControl, "t4", std::string("ok")}};
  const auto map = replay(events);
  EXPECT_EQ(map.at("r").at("A1").state, BatchState::AtControl);
  EXPECT_EQ(map.at("r").at("A1").note, std::optional<std::string>("ok"));
  EXPECT_FALSE(map.at("r").count("A2"));
}

TEST_F(ServiceTest, ConcurrentWritersSerialise) {
  const auto path = temp_log("concurrent");
  ControlService svc({run}, path);
  std::vector<std::jthread> workers;
  std::atomic<int> accepted{0};
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&] {
      for (const auto& mb : run.schedule.sequence) {
        for (const char* s : {"cut", "at_control", "sorted"}) {
          if (set_state(svc, mb, s).status == 200) ++accepted;
          svc.handle("GET", base + "/schedule");
        }
      }
    });
  }
  workers.clear();
  EXPECT_EQ(accepted.load(), static_cast<int>(3 * run.schedule.sequence.size()));
  EXPECT_EQ(EventLog(path).read().size(), 3 * run.schedule.sequence.size());
}

TEST_F(ServiceTest, HttpLoopback) {
  ControlService svc({run});
  HttpFrontend frontend(svc);
  const int port = frontend.bind_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::jthread server([&] { frontend.listen(); });
  httplib::Client client("127.0.0.1", port);
  httplib::Result runs;
  for (int attempt = 0; attempt < 50 && !(runs = client.Get("/runs")); ++attempt) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ASSERT_TRUE(runs);
  EXPECT_EQ(runs->status, 200);
  auto sched = client.Get(base + "/schedule");
  ASSERT_TRUE(sched);
  EXPECT_EQ(sched->status, 200);
  auto md = client.Get(base + "/report?format=markdown");
  ASSERT_TRUE(md);
  EXPECT_NE(json::parse(md->body)["report"].get<std::string>().find("| pos | mb_id"), std::string::npos);
  auto skip = client.Post(base + "/batches/" + run.schedule.sequence[0] + "/status", R"({"state":"sorted"})",
                          "application/json");
  ASSERT_TRUE(skip);
  EXPECT_EQ(skip->status, 409);
  auto missing = client.Get("/runs/none/pallets");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  frontend.stop();
}
