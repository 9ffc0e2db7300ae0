#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kernelcut/pipeline.hpp"

namespace kernelcut::service {

enum class BatchState { Pending, Cut, AtControl, Sorted };

std::string_view to_string(BatchState state);
std::optional<BatchState> batch_state_from_string(std::string_view name);
// Only one step forward: pending -> cut -> at_control -> sorted.
bool is_legal_transition(BatchState from, BatchState to);

struct BatchStatus {
  std::string mb_id;
  BatchState state = BatchState::Pending;
  std::string updated_at;
  std::optional<std::string> note;

  bool operator==(const BatchStatus&) const = default;
};

struct StatusEvent {
  std::string run_id;
  std::string mb_id;
  BatchState state = BatchState::Pending;
  std::string updated_at;
  std::optional<std::string> note;

  bool operator==(const StatusEvent&) const = default;
};

nlohmann::json to_json(const StatusEvent& e);
StatusEvent event_from_json(const nlohmann::json& j);

// run_id -> mb_id -> status. Batches without events are absent (pending).
using StatusMap = std::map<std::string, std::map<std::string, BatchStatus>>;

// Applies events in order to an empty map, skipping illegal transitions.
StatusMap replay(const std::vector<StatusEvent>& events);

// Append-only JSON-lines file.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path path);

  void append(const StatusEvent& event);
  std::vector<StatusEvent> read() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Operator API over a fixed set of runs. Readers run concurrently; status
// changes and log appends go through one writer lock.
class ControlService {
 public:
  using Clock = std::function<std::string()>;

  explicit ControlService(std::vector<RunArtifacts> runs,
                          std::optional<std::filesystem::path> event_log = std::nullopt,
                          Clock clock = {});

  // GET  /runs
  // GET  /runs/{id}/schedule | /pallets | /report[?format=markdown]
  // POST /runs/{id}/batches/{mb_id}/status  {"state": ..., "note": ...}
  // POST /runs/{id}/whatif                  {"sequence": [...]}
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body = {},
                      const std::map<std::string, std::string>& query = {});

  const RunArtifacts* find_run(const std::string& run_id) const;
  BatchStatus status(const std::string& run_id, const std::string& mb_id) const;

 private:
  HttpResponse list_runs() const;
  HttpResponse get_schedule(const RunArtifacts& run) const;
  HttpResponse get_pallets(const RunArtifacts& run) const;
  HttpResponse get_report(const RunArtifacts& run, const std::map<std::string, std::string>& query) const;
  HttpResponse post_status(const RunArtifacts& run, const std::string& mb_id, std::string_view body);
  HttpResponse post_whatif(const RunArtifacts& run, std::string_view body) const;
  BatchStatus status_locked(const std::string& run_id, const std::string& mb_id) const;

  std::vector<RunArtifacts> runs_;
  std::optional<EventLog> log_;
  Clock clock_;
  StatusMap statuses_;
  mutable std::shared_mutex mutex_;
};

// Binds ControlService to a cpp-httplib server.
class HttpFrontend {
 public:
  explicit HttpFrontend(ControlService& service);
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  int bind_any_port(const std::string& host);
  void listen();  // blocks until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Loads every *.json run artifact file in a directory.
std::vector<RunArtifacts> load_runs(const std::filesystem::path& dir);

}  // namespace kernelcut::service
