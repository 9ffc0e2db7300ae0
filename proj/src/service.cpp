#include "kernelcut/service.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>

#include "httplib.h"
#include "kernelcut/metrics.hpp"
#include "kernelcut/report.hpp"
#include "kernelcut/serialization.hpp"

namespace kernelcut::service {

using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

HttpResponse reply(int status, json body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_reply(int status, const std::string& message, const RunArtifacts* run = nullptr) {
  json body = {{"error", message}};
  if (run) {
    body["run_id"] = run->run_id;
    body["config_digest"] = run->config_digest;
  }
  return reply(status, body);
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    if (end > start) parts.emplace_back(path.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

}  // namespace

std::string_view to_string(BatchState state) {
  switch (state) {
    case BatchState::Pending: return "pending";
    case BatchState::Cut: return "cut";
    case BatchState::AtControl: return "at_control";
    case BatchState::Sorted: return "sorted";
  }
  return "pending";
}

std::optional<BatchState> batch_state_from_string(std::string_view name) {
  for (auto s : {BatchState::Pending, BatchState::Cut, BatchState::AtControl, BatchState::Sorted}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

bool is_legal_transition(BatchState from, BatchState to) {
  return static_cast<int>(to) == static_cast<int>(from) + 1;
}

json to_json(const StatusEvent& e) {
  json j = {{"run_id", e.run_id},
            {"mb_id", e.mb_id},
            {"state", to_string(e.state)},
            {"updated_at", e.updated_at}};
  j["note"] = e.note ? json(*e.note) : json(nullptr);
  return j;
}

StatusEvent event_from_json(const json& j) {
  StatusEvent e;
  e.run_id = j.at("run_id").get<std::string>();
  e.mb_id = j.at("mb_id").get<std::string>();
  auto state = batch_state_from_string(j.at("state").get<std::string>());
  if (!state) throw Error(ErrorCode::ParseError, "unknown batch state in event log");
  e.state = *state;
  e.updated_at = j.at("updated_at").get<std::string>();
  if (j.contains("note") && !j.at("note").is_null()) e.note = j.at("note").get<std::string>();
  return e;
}

StatusMap replay(const std::vector<StatusEvent>& events) {
  StatusMap map;
  for (const auto& e : events) {
    auto& per_run = map[e.run_id];
    auto it = per_run.find(e.mb_id);
    const auto current = it == per_run.end() ? BatchState::Pending : it->second.state;
    if (!is_legal_transition(current, e.state)) continue;
    per_run[e.mb_id] = {e.mb_id, e.state, e.updated_at, e.note};
  }
  return map;
}

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {}

void EventLog::append(const StatusEvent& event) {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot open event log " + path_.string());
  out << to_json(event).dump() << "\n";
  out.flush();
}

std::vector<StatusEvent> EventLog::read() const {
  std::vector<StatusEvent> events;
  std::ifstream in(path_);
  if (!in) return events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      events.push_back(event_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path_.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return events;
}

ControlService::ControlService(std::vector<RunArtifacts> runs,
                               std::optional<std::filesystem::path> event_log, Clock clock)
    : runs_(std::move(runs)), clock_(clock ? std::move(clock) : Clock(utc_now)) {
  if (event_log) {
    log_.emplace(*event_log);
    statuses_ = replay(log_->read());
  }
}

const RunArtifacts* ControlService::find_run(const std::string& run_id) const {
  for (const auto& r : runs_) {
    if (r.run_id == run_id) return &r;
  }
  return nullptr;
}

BatchStatus ControlService::status(const std::string& run_id, const std::string& mb_id) const {
  std::shared_lock lock(mutex_);
  return status_locked(run_id, mb_id);
}

BatchStatus ControlService::status_locked(const std::string& run_id, const std::string& mb_id) const {
  auto run = statuses_.find(run_id);
  if (run != statuses_.end()) {
    auto it = run->second.find(mb_id);
    if (it != run->second.end()) return it->second;
  }
  return {mb_id, BatchState::Pending, {}, std::nullopt};
}

HttpResponse ControlService::handle(std::string_view method, std::string_view path,
                                    std::string_view body,
                                    const std::map<std::string, std::string>& query) {
  const auto parts = split_path(path);
  if (parts.empty() || parts[0] != "runs") return error_reply(404, "no such endpoint");
  if (parts.size() == 1) {
    if (method != "GET") return error_reply(405, "method not allowed");
    return list_runs();
  }
  const auto* run = find_run(parts[1]);
  if (!run) return error_reply(404, "unknown run_id " + parts[1]);

  if (parts.size() == 3 && method == "GET") {
    if (parts[2] == "schedule") return get_schedule(*run);
    if (parts[2] == "pallets") return get_pallets(*run);
    if (parts[2] == "report") return get_report(*run, query);
  }
  if (parts.size() == 3 && parts[2] == "whatif" && method == "POST") return post_whatif(*run, body);
  if (parts.size() == 5 && parts[2] == "batches" && parts[4] == "status" && method == "POST") {
    return post_status(*run, parts[3], body);
  }
  return error_reply(404, "no such endpoint", run);
}

HttpResponse ControlService::list_runs() const {
  json runs = json::array();
  for (const auto& r : runs_) {
    runs.push_back({{"run_id", r.run_id},
                    {"config_digest", r.config_digest},
                    {"order_digest", r.order_digest},
                    {"created_at", r.created_at},
                    {"mb_count", r.batching.mb_count()}});
  }
  return reply(200, {{"runs", runs}});
}

HttpResponse ControlService::get_schedule(const RunArtifacts& run) const {
  std::shared_lock lock(mutex_);
  json entries = json::array();
  for (std::size_t p = 0; p < run.schedule.sequence.size(); ++p) {
    const auto& id = run.schedule.sequence[p];
    const auto& mb = run.batching.manufacturing_batches.at(run.batching.index_of(id));
    const auto st = status_locked(run.run_id, id);
    json e = {{"position", p},
              {"mb_id", id},
              {"fprb", run.batching.fpr_batches.at(mb.fprb_index).label},
              {"thickness", mb.thickness.tenths},
              {"kernel_count", mb.kernel_ids.size()},
              {"fpr_ids", mb.fpr_ids},
              {"state", to_string(st.state)},
              {"updated_at", st.updated_at}};
    e["note"] = st.note ? json(*st.note) : json(nullptr);
    entries.push_back(std::move(e));
  }
  return reply(200, {{"run_id", run.run_id},
                     {"config_digest", run.config_digest},
                     {"fitness", run.fitness},
                     {"weights", run.weights},
                     {"sequence", entries}});
}

HttpResponse ControlService::get_pallets(const RunArtifacts& run) const {
  json body = run.timeline;
  body["run_id"] = run.run_id;
  body["config_digest"] = run.config_digest;
  return reply(200, body);
}

HttpResponse ControlService::get_report(const RunArtifacts& run,
                                        const std::map<std::string, std::string>& query) const {
  ReportFormat format = ReportFormat::Text;
  if (auto it = query.find("format"); it != query.end()) {
    try {
      format = report_format_from_string(it->second);
    } catch (const Error& e) {
      return error_reply(400, e.what(), &run);
    }
  }
  return reply(200, {{"run_id", run.run_id},
                     {"config_digest", run.config_digest},
                     {"format", format == ReportFormat::Text ? "text" : "markdown"},
                     {"report", render_report(run, format)}});
}

HttpResponse ControlService::post_status(const RunArtifacts& run, const std::string& mb_id,
                                         std::string_view body) {
  if (run.batching.index_of(mb_id) == run.batching.mb_count()) {
    return error_reply(404, "unknown batch " + mb_id, &run);
  }
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    return error_reply(400, "body is not JSON", &run);
  }
  if (!doc.is_object() || !doc.contains("state") || !doc["state"].is_string()) {
    return error_reply(400, "body must be {\"state\": ..., \"note\"?: ...}", &run);
  }
  const auto target = batch_state_from_string(doc["state"].get<std::string>());
  if (!target) return error_reply(400, "unknown state " + doc["state"].get<std::string>(), &run);
  std::optional<std::string> note;
  if (doc.contains("note") && !doc["note"].is_null()) {
    if (!doc["note"].is_string()) return error_reply(400, "note must be a string", &run);
    note = doc["note"].get<std::string>();
  }

  std::unique_lock lock(mutex_);
  const auto current = status_locked(run.run_id, mb_id);
  if (!is_legal_transition(current.state, *target)) {
    json body_out = {{"error", "illegal transition"},
                     {"run_id", run.run_id},
                     {"config_digest", run.config_digest},
                     {"mb_id", mb_id},
                     {"current", to_string(current.state)},
                     {"requested", to_string(*target)}};
    return reply(409, body_out);
  }
  StatusEvent event{run.run_id, mb_id, *target, clock_(), note};
  if (log_) log_->append(event);
  statuses_[run.run_id][mb_id] = {mb_id, *target, event.updated_at, note};

  json out = {{"run_id", run.run_id},
              {"config_digest", run.config_digest},
              {"mb_id", mb_id},
              {"state", to_string(*target)},
              {"updated_at", event.updated_at}};
  out["note"] = note ? json(*note) : json(nullptr);
  return reply(200, out);
}

HttpResponse ControlService::post_whatif(const RunArtifacts& run, std::string_view body) const {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    return error_reply(400, "body is not JSON", &run);
  }
  if (!doc.is_object() || !doc.contains("sequence") || !doc["sequence"].is_array()) {
    return error_reply(400, "body must be {\"sequence\": [mb_id, ...]}", &run);
  }
  std::vector<std::string> seq;
  for (const auto& id : doc["sequence"]) {
    if (!id.is_string()) return error_reply(400, "sequence entries must be batch ids", &run);
    seq.push_back(id.get<std::string>());
  }
  const auto hypothetical = Schedule::from_sequence(std::move(seq));
  auto check = check_constraints(hypothetical, run.batching);
  if (!check.ok()) {
    json violations = json::array();
    for (const auto& v : check.violations) {
      violations.push_back({{"kind", to_string(v.kind)}, {"subject", v.subject}});
    }
    json out = {{"error", "sequence is not a permutation of the run's batches"},
                {"run_id", run.run_id},
                {"config_digest", run.config_digest},
                {"violations", violations}};
    return reply(400, out);
  }
  const auto value = fitness(hypothetical, run.batching, run.weights);
  const auto timeline = metrics::simulate_control_step(hypothetical, run.batching, run.timeline.limit);
  const auto wip = metrics::max_wip_same_fpr(hypothetical, run.batching);
  const auto base_wip = metrics::max_wip_same_fpr(run.schedule, run.batching);

  auto diff = [](auto a, auto b) { return static_cast<double>(a) - static_cast<double>(b); };
  json out = {{"run_id", run.run_id},
              {"config_digest", run.config_digest},
              {"f1", value.f1},
              {"f2", value.f2},
              {"combined", value.combined},
              {"max_open", timeline.max_open},
              {"max_wip_same_fpr", wip},
              {"limit_violations", timeline.violations},
              {"delta",
               {{"f1", diff(value.f1, run.fitness.f1)},
                {"f2", diff(value.f2, run.fitness.f2)},
                {"combined", value.combined - run.fitness.combined},
                {"max_open", diff(timeline.max_open, run.timeline.max_open)},
                {"max_wip_same_fpr", diff(wip, base_wip)}}}};
  return reply(200, out);
}

struct HttpFrontend::Impl {
  httplib::Server server;
};

HttpFrontend::HttpFrontend(ControlService& service) : impl_(std::make_unique<Impl>()) {
  auto route = [&service](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query[k] = v;
    auto r = service.handle(req.method, req.path, req.body, query);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  impl_->server.Get(R"(/runs(/.*)?)", route);
  impl_->server.Post(R"(/runs/.*)", route);
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

int HttpFrontend::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

void HttpFrontend::listen() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() {
  if (impl_) impl_->server.stop();
}

std::vector<RunArtifacts> load_runs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunArtifacts> runs;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      runs.push_back(artifacts_from_json(json::parse(in)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, f.string() + ": " + e.what());
    }
  }
  return runs;
}

}  // namespace kernelcut::service
