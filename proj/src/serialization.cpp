#include "kernelcut/serialization.hpp"

namespace kernelcut {

using nlohmann::json;

void to_json(json& j, const Kernel& k) {
  j = {{"kernel_id", k.kernel_id},
       {"fpr_id", k.fpr_id},
       {"thickness", k.thickness.tenths},
       {"piece_count", k.piece_count},
       {"oversize", k.oversize}};
}

void from_json(const json& j, Kernel& k) {
  k.kernel_id = j.at("kernel_id").get<std::string>();
  k.fpr_id = j.at("fpr_id").get<std::string>();
  k.thickness.tenths = j.at("thickness").get<std::int32_t>();
  k.piece_count = j.at("piece_count").get<std::int64_t>();
  k.oversize = j.value("oversize", false);
}

void to_json(json& j, const FinishedProductReference& f) {
  std::vector<std::int32_t> ts;
  for (const auto& t : f.thickness_set) ts.push_back(t.tenths);
  j = {{"fpr_id", f.fpr_id}, {"kernel_ids", f.kernel_ids}, {"thickness_set", ts}};
}

void to_json(json& j, const OrderBook& b) {
  j = {{"kernels", b.kernels}, {"fprs", b.fprs}, {"n_fprs", b.n_fprs}};
}

void to_json(json& j, const Violation& v) {
  j = {{"kind", to_string(v.kind)}, {"subject", v.subject}, {"message", v.message}};
}

void to_json(json& j, const ValidationReport& r) {
  j = {{"valid", r.valid()}, {"violations", r.violations}, {"warnings", r.warnings}};
}

void to_json(json& j, const FprBatch& b) {
  j = {{"label", b.label}, {"fpr_ids", b.fpr_ids}, {"p_m", b.p_m}, {"piece_count", b.piece_count}};
}

void from_json(const json& j, FprBatch& b) {
  b.label = j.at("label").get<std::string>();
  b.fpr_ids = j.at("fpr_ids").get<std::vector<std::string>>();
  b.p_m = j.at("p_m").get<std::size_t>();
  b.piece_count = j.value("piece_count", std::int64_t{0});
}

void to_json(json& j, const ManufacturingBatch& mb) {
  j = {{"mb_id", mb.mb_id},
       {"fprb_index", mb.fprb_index},
       {"thickness", mb.thickness.tenths},
       {"kernel_ids", mb.kernel_ids},
       {"fpr_ids", mb.fpr_ids}};
}

void from_json(const json& j, ManufacturingBatch& mb) {
  mb.mb_id = j.at("mb_id").get<std::string>();
  mb.fprb_index = j.at("fprb_index").get<std::size_t>();
  mb.thickness.tenths = j.at("thickness").get<std::int32_t>();
  mb.kernel_ids = j.at("kernel_ids").get<std::vector<std::string>>();
  mb.fpr_ids = j.at("fpr_ids").get<std::vector<std::string>>();
}

void to_json(json& j, const BatchingResult& r) {
  j = {{"fpr_batches", r.fpr_batches},
       {"manufacturing_batches", r.manufacturing_batches},
       {"assignment", r.assignment},
       {"excluded_kernel_ids", r.excluded_kernel_ids},
       {"piece_count_stddev", r.piece_count_stddev}};
}

void from_json(const json& j, BatchingResult& r) {
  r.fpr_batches = j.at("fpr_batches").get<std::vector<FprBatch>>();
  r.manufacturing_batches = j.at("manufacturing_batches").get<std::vector<ManufacturingBatch>>();
  r.assignment = j.at("assignment").get<std::map<std::string, std::string>>();
  r.excluded_kernel_ids = j.at("excluded_kernel_ids").get<std::vector<std::string>>();
  r.piece_count_stddev = j.at("piece_count_stddev").get<double>();
}

void to_json(json& j, const Schedule& s) {
  j = {{"sequence", s.sequence}, {"positions", s.positions}};
}

void from_json(const json& j, Schedule& s) {
  s.sequence = j.at("sequence").get<std::vector<std::string>>();
  s.positions = j.at("positions").get<std::map<std::string, std::size_t>>();
}

void to_json(json& j, const ObjectiveWeights& w) { j = {{"alpha", w.alpha}, {"beta", w.beta}}; }

void from_json(const json& j, ObjectiveWeights& w) {
  w.alpha = j.at("alpha").get<double>();
  w.beta = j.at("beta").get<double>();
}

void to_json(json& j, const FitnessValue& v) {
  j = {{"f1", v.f1}, {"f2", v.f2}, {"combined", v.combined}};
}

void from_json(const json& j, FitnessValue& v) {
  v.f1 = j.at("f1").get<std::uint64_t>();
  v.f2 = j.at("f2").get<std::uint64_t>();
  v.combined = j.at("combined").get<double>();
}

void to_json(json& j, const ConstraintReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"kind", to_string(v.kind)}, {"subject", v.subject}, {"message", v.message}});
  }
  j = {{"ok", r.ok()}, {"violations", violations}, {"fprb_count", r.fprb_count}};
  j["f1"] = r.f1 ? json(*r.f1) : json(nullptr);
  j["f2"] = r.f2 ? json(*r.f2) : json(nullptr);
  j["f2_at_least_fprb_count"] =
      r.f2_at_least_fprb_count ? json(*r.f2_at_least_fprb_count) : json(nullptr);
}

namespace ga {

void to_json(json& j, const Individual& i) {
  j = {{"genes", i.genes}};
  j["fitness"] = i.fitness ? json(*i.fitness) : json(nullptr);
}

void from_json(const json& j, Individual& i) {
  i.genes = j.at("genes").get<std::vector<std::uint32_t>>();
  if (j.at("fitness").is_null()) {
    i.fitness.reset();
  } else {
    i.fitness = j.at("fitness").get<FitnessValue>();
  }
}

void to_json(json& j, const GaRunResult& r) {
  json history = json::array();
  for (const auto& h : r.history) history.push_back({h.best, h.mean});
  j = {{"best", r.best},
       {"history", history},
       {"generations_run", r.generations_run},
       {"termination_reason", to_string(r.termination_reason)}};
}

void from_json(const json& j, GaRunResult& r) {
  r.best = j.at("best").get<Individual>();
  r.history.clear();
  for (const auto& h : j.at("history")) r.history.push_back({h.at(0).get<double>(), h.at(1).get<double>()});
  r.generations_run = j.at("generations_run").get<std::size_t>();
  const auto reason = j.at("termination_reason").get<std::string>();
  for (auto candidate : {TerminationReason::MaxGenerations, TerminationReason::Stagnation,
                         TerminationReason::LowerBoundReached}) {
    if (reason == to_string(candidate)) r.termination_reason = candidate;
  }
}

}  // namespace ga

namespace metrics {

void to_json(json& j, const ComparisonRow& r) {
  j = {{"policy", r.policy},
       {"setups", r.setups},
       {"max_wip_same_fpr", r.max_wip_same_fpr},
       {"max_pallets_open", r.max_pallets_open}};
}

void from_json(const json& j, ComparisonRow& r) {
  r.policy = j.at("policy").get<std::string>();
  r.setups = j.at("setups").get<std::uint64_t>();
  r.max_wip_same_fpr = j.at("max_wip_same_fpr").get<std::uint64_t>();
  r.max_pallets_open = j.at("max_pallets_open").get<std::size_t>();
}

void to_json(json& j, const ComparisonReport& r) { j = {{"rows", r.rows}}; }

void from_json(const json& j, ComparisonReport& r) {
  r.rows = j.at("rows").get<std::vector<ComparisonRow>>();
}

void to_json(json& j, const OpenPallet& p) {
  j = {{"fpr_id", p.fpr_id},
       {"fprb", p.fprb_label},
       {"opened_at", p.opened_at},
       {"closed_after", p.closed_after}};
}

void from_json(const json& j, OpenPallet& p) {
  p.fpr_id = j.at("fpr_id").get<std::string>();
  p.fprb_label = j.at("fprb").get<std::string>();
  p.opened_at = j.at("opened_at").get<std::size_t>();
  p.closed_after = j.at("closed_after").get<std::size_t>();
}

void to_json(json& j, const PalletTimeline& t) {
  j = {{"open", t.open},
       {"pallets", t.pallets},
       {"max_open", t.max_open},
       {"limit", t.limit},
       {"violations", t.violations}};
}

void from_json(const json& j, PalletTimeline& t) {
  t.open = j.at("open").get<std::vector<std::vector<std::string>>>();
  t.pallets = j.at("pallets").get<std::vector<OpenPallet>>();
  t.max_open = j.at("max_open").get<std::size_t>();
  t.limit = j.at("limit").get<std::size_t>();
  t.violations = j.at("violations").get<std::vector<std::size_t>>();
}

}  // namespace metrics

}  // namespace kernelcut
