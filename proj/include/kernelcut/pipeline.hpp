#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "kernelcut/batching.hpp"
#include "kernelcut/config.hpp"
#include "kernelcut/error.hpp"
#include "kernelcut/ga.hpp"
#include "kernelcut/metrics.hpp"
#include "kernelcut/model.hpp"
#include "kernelcut/objective.hpp"

namespace kernelcut {

// Everything one optimisation run produced. All of it is regenerable from the
// order book and the configuration (which includes the seed); only run_id and
// created_at depend on when the run happened.
struct RunArtifacts {
  std::string run_id;
  std::string created_at;
  std::string order_digest;
  config::RunConfig config;
  std::string config_digest;
  ObjectiveWeights weights;
  BatchingResult batching;
  Schedule schedule;
  FitnessValue fitness;
  ga::GaRunResult ga;
  metrics::ComparisonReport comparison;
  metrics::PalletTimeline timeline;
};

class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const Error& cause)
      : Error(cause.code(), "stage " + stage + ": " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// validation -> batching -> scheduling -> metrics. created_at defaults to the
// current UTC time.
RunArtifacts run_pipeline(const OrderBook& book, const config::RunConfig& config,
                          std::string created_at = {});

// Schedule file: JSON listing every batch with its explicit position.
std::string write_schedule_file(const RunArtifacts& artifacts);
// Sequence in file order, positions from the explicit fields, so hand edits
// that break the permutation show up in check_constraints.
Schedule read_schedule_file(std::string_view text);

nlohmann::json artifacts_to_json(const RunArtifacts& artifacts);
RunArtifacts artifacts_from_json(const nlohmann::json& j);
std::string artifacts_digest(const RunArtifacts& artifacts);

}  // namespace kernelcut
