#pragma once

// nlohmann::json conversions for the domain types.

#include "json.hpp"
#include "kernelcut/batching.hpp"
#include "kernelcut/ga.hpp"
#include "kernelcut/metrics.hpp"
#include "kernelcut/model.hpp"
#include "kernelcut/objective.hpp"

namespace kernelcut {

void to_json(nlohmann::json& j, const Kernel& k);
void from_json(const nlohmann::json& j, Kernel& k);
void to_json(nlohmann::json& j, const FinishedProductReference& f);
void to_json(nlohmann::json& j, const OrderBook& b);
void to_json(nlohmann::json& j, const Violation& v);
void to_json(nlohmann::json& j, const ValidationReport& r);

void to_json(nlohmann::json& j, const FprBatch& b);
void from_json(const nlohmann::json& j, FprBatch& b);
void to_json(nlohmann::json& j, const ManufacturingBatch& mb);
void from_json(const nlohmann::json& j, ManufacturingBatch& mb);
void to_json(nlohmann::json& j, const BatchingResult& r);
void from_json(const nlohmann::json& j, BatchingResult& r);

void to_json(nlohmann::json& j, const Schedule& s);
void from_json(const nlohmann::json& j, Schedule& s);
void to_json(nlohmann::json& j, const ObjectiveWeights& w);
void from_json(const nlohmann::json& j, ObjectiveWeights& w);
void to_json(nlohmann::json& j, const FitnessValue& v);
void from_json(const nlohmann::json& j, FitnessValue& v);
void to_json(nlohmann::json& j, const ConstraintReport& r);

namespace ga {
void to_json(nlohmann::json& j, const Individual& i);
void from_json(const nlohmann::json& j, Individual& i);
void to_json(nlohmann::json& j, const GaRunResult& r);
void from_json(const nlohmann::json& j, GaRunResult& r);
}  // namespace ga

namespace metrics {
void to_json(nlohmann::json& j, const ComparisonRow& r);
void from_json(const nlohmann::json& j, ComparisonRow& r);
void to_json(nlohmann::json& j, const ComparisonReport& r);
void from_json(const nlohmann::json& j, ComparisonReport& r);
void to_json(nlohmann::json& j, const OpenPallet& p);
void from_json(const nlohmann::json& j, OpenPallet& p);
void to_json(nlohmann::json& j, const PalletTimeline& t);
void from_json(const nlohmann::json& j, PalletTimeline& t);
}  // namespace metrics

}  // namespace kernelcut
