#include "kernelcut/pipeline.hpp"

#include <chrono>
#include <ctime>

#include "kernelcut/io.hpp"
#include "kernelcut/serialization.hpp"

namespace kernelcut {

using nlohmann::json;

namespace {

constexpr const char* kScheduleFormat = "kernelcut-schedule/1";

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(name, e);
  }
}

}  // namespace

RunArtifacts run_pipeline(const OrderBook& book, const config::RunConfig& config,
                          std::string created_at) {
  config.validate();
  RunArtifacts a;
  a.created_at = created_at.empty() ? utc_now() : std::move(created_at);
  a.run_id = a.created_at + "-s" + std::to_string(config.ga.seed);
  a.config = config;
  a.config_digest = config::config_digest(config);

  stage("validation", [&] {
    auto report = validate_order_book(book);
    if (!report.valid()) throw io::InvalidOrderBookError(std::move(report));
    return 0;
  });
  a.order_digest = io::order_digest(book);

  a.batching = stage("batching", [&] { return batch_orders(book, config.batching); });
  a.weights = config.weights_for(a.batching.mb_count());

  stage("scheduling", [&] {
    a.ga = ga::evolve(a.batching, a.weights, config.ga);
    a.schedule = Schedule::from_indices(a.ga.best.genes, a.batching);
    a.fitness = *a.ga.best.fitness;
    return 0;
  });

  stage("metrics", [&] {
    metrics::PolicyPlan proposed{a.batching, a.schedule};
    a.comparison = metrics::compare(book, proposed, config.pallet_limit);
    a.timeline = metrics::simulate_control_step(a.schedule, a.batching, config.pallet_limit);
    return 0;
  });
  return a;
}

std::string write_schedule_file(const RunArtifacts& a) {
  json batches = json::array();
  for (std::size_t p = 0; p < a.schedule.sequence.size(); ++p) {
    const auto& mb = a.batching.manufacturing_batches.at(a.batching.index_of(a.schedule.sequence[p]));
    batches.push_back({{"position", a.schedule.positions.at(mb.mb_id)},
                       {"mb_id", mb.mb_id},
                       {"fprb", a.batching.fpr_batches.at(mb.fprb_index).label},
                       {"thickness", mb.thickness.tenths},
                       {"kernel_ids", mb.kernel_ids}});
  }
  json doc = {{"format", kScheduleFormat},
              {"order_digest", a.order_digest},
              {"config_digest", a.config_digest},
              {"seed", a.config.ga.seed},
              {"weights", a.weights},
              {"fitness", a.fitness},
              {"batches", batches}};
  return doc.dump(2) + "\n";
}

Schedule read_schedule_file(std::string_view text) {
  try {
    const auto doc = json::parse(text);
    if (doc.value("format", std::string()) != kScheduleFormat) {
      throw Error(ErrorCode::ParseError, std::string("not a ") + kScheduleFormat + " document");
    }
    Schedule s;
    for (const auto& b : doc.at("batches")) {
      const auto id = b.at("mb_id").get<std::string>();
      s.sequence.push_back(id);
      s.positions[id] = b.at("position").get<std::size_t>();
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("schedule file: ") + e.what());
  }
}

json artifacts_to_json(const RunArtifacts& a) {
  return {{"run_id", a.run_id},
          {"created_at", a.created_at},
          {"order_digest", a.order_digest},
          {"config", config::config_echo(a.config)},
          {"config_digest", a.config_digest},
          {"weights", a.weights},
          {"batching", a.batching},
          {"schedule", a.schedule},
          {"fitness", a.fitness},
          {"ga", a.ga},
          {"comparison", a.comparison},
          {"timeline", a.timeline}};
}

RunArtifacts artifacts_from_json(const json& j) {
  try {
    RunArtifacts a;
    a.run_id = j.at("run_id").get<std::string>();
    a.created_at = j.at("created_at").get<std::string>();
    a.order_digest = j.at("order_digest").get<std::string>();
    a.config = config::config_from_echo(j.at("config"));
    a.config_digest = j.at("config_digest").get<std::string>();
    a.weights = j.at("weights").get<ObjectiveWeights>();
    a.batching = j.at("batching").get<BatchingResult>();
    a.schedule = j.at("schedule").get<Schedule>();
    a.fitness = j.at("fitness").get<FitnessValue>();
    a.ga = j.at("ga").get<ga::GaRunResult>();
    a.comparison = j.at("comparison").get<metrics::ComparisonReport>();
    a.timeline = j.at("timeline").get<metrics::PalletTimeline>();
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("run artifacts: ") + e.what());
  }
}

std::string artifacts_digest(const RunArtifacts& a) {
  return io::sha256_hex(artifacts_to_json(a).dump());
}

}  // namespace kernelcut
