#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kernelcut/batching.hpp"
#include "kernelcut/config.hpp"
#include "kernelcut/io.hpp"
#include "kernelcut/metrics.hpp"
#include "kernelcut/oracle.hpp"
#include "kernelcut/pipeline.hpp"
#include "kernelcut/report.hpp"
#include "kernelcut/serialization.hpp"
#include "kernelcut/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kernelcut;

namespace {

struct CommonOptions {
  std::string input;
  std::string format = "csv";
  std::string output;
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

std::string kebab(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  out << text;
}

OrderBook load_orders(const CommonOptions& o, bool validate = true) {
  std::istringstream in(read_input(o.input));
  const auto fmt = io::order_format_from_string(o.format);
  return validate ? io::parse_orders(in, fmt) : io::parse_orders_unchecked(in, fmt);
}

config::RunConfig effective_config(const CommonOptions& o) {
  std::vector<std::pair<std::string, std::string>> flags(o.overrides.begin(), o.overrides.end());
  std::optional<fs::path> path;
  if (!o.config_path.empty()) path = o.config_path;
  return config::load_config(path, flags);
}

void add_input_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-i,--input", o.input, "Order book file (default: stdin)");
  cmd->add_option("-f,--format", o.format, "Order format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", o.output, "Output file (default: stdout)");
}

void add_config_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "Config file (key=value lines or JSON)");
  for (const auto& key : config::config_keys()) {
    cmd->add_option_function<std::string>(
        "--" + kebab(key), [&o, key](const std::string& v) { o.overrides[key] = v; },
        "Override " + key);
  }
}

std::atomic<service::HttpFrontend*> g_frontend{nullptr};

void on_signal(int) {
  if (auto* f = g_frontend.load()) f->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level batching and sequencing for kernel cutting"};
  app.require_subcommand(1);

  CommonOptions o;
  std::string artifacts_dir;
  std::string schedule_out;
  std::string report_out;
  std::string report_format = "text";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string event_log;

  auto* validate = app.add_subcommand("validate", "Parse and validate an order book");
  add_input_options(validate, o);

  auto* batch = app.add_subcommand("batch", "Build FPR batches and manufacturing batches");
  add_input_options(batch, o);
  add_config_options(batch, o);

  auto* schedule = app.add_subcommand("schedule", "Run the full pipeline and write the schedule file");
  add_input_options(schedule, o);
  add_config_options(schedule, o);
  schedule->add_option("--artifacts", artifacts_dir, "Directory to store the run artifacts in");
  schedule->add_option("--report", report_out, "Also write the report to this file");
  schedule->add_option("--report-format", report_format)->check(CLI::IsMember({"text", "markdown"}));

  auto* compare = app.add_subcommand("compare", "Run the pipeline and print the policy comparison");
  add_input_options(compare, o);
  add_config_options(compare, o);

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum for small instances");
  add_input_options(oracle_cmd, o);
  add_config_options(oracle_cmd, o);

  auto* report = app.add_subcommand("report", "Render a report from a stored run artifact file");
  report->add_option("-i,--input", o.input, "Run artifact JSON (default: stdin)");
  report->add_option("-o,--output", o.output, "Output file (default: stdout)");
  report->add_option("--report-format", report_format)->check(CLI::IsMember({"text", "markdown"}));

  auto* serve = app.add_subcommand("serve", "Serve stored runs over HTTP for the control station");
  serve->add_option("--artifacts", artifacts_dir, "Directory of run artifact files")->required();
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--event-log", event_log, "Status event log (default: <artifacts>/events.jsonl)");
  serve->add_option("-i,--input", o.input, "Ignored; runs come from --artifacts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto book = load_orders(o, false);
      const auto rep = validate_order_book(book);
      json out = rep;
      out["order_digest"] = io::order_digest(book);
      out["kernel_count"] = book.kernels.size();
      out["fpr_count"] = book.fprs.size();
      write_output(o.output, out.dump(2));
      return rep.valid() ? 0 : 2;
    }
    if (*batch) {
      const auto cfg = effective_config(o);
      const auto book = load_orders(o);
      json out = batch_orders(book, cfg.batching);
      out["order_digest"] = io::order_digest(book);
      out["config_digest"] = config::config_digest(cfg);
      write_output(o.output, out.dump(2));
      return 0;
    }
    if (*schedule || *compare) {
      const auto cfg = effective_config(o);
      const auto book = load_orders(o);
      const auto run = run_pipeline(book, cfg);
      if (*compare) {
        json out = {{"run_id", run.run_id},
                    {"config_digest", run.config_digest},
                    {"comparison", run.comparison}};
        write_output(o.output, out.dump(2));
        return 0;
      }
      write_output(o.output, write_schedule_file(run));
      if (!artifacts_dir.empty()) {
        fs::create_directories(artifacts_dir);
        write_output((fs::path(artifacts_dir) / (run.run_id + ".json")).string(),
                     artifacts_to_json(run).dump(2));
      }
      if (!report_out.empty()) {
        write_output(report_out, render_report(run, report_format_from_string(report_format)));
      }
      std::cerr << "run " << run.run_id << ": f1=" << run.fitness.f1 << " f2=" << run.fitness.f2
                << " combined=" << run.fitness.combined << " generations=" << run.ga.generations_run
                << "\n";
      return 0;
    }
    if (*oracle_cmd) {
      const auto cfg = effective_config(o);
      const auto book = load_orders(o);
      const auto batching = batch_orders(book, cfg.batching);
      const auto weights = cfg.weights_for(batching.mb_count());
      const auto best = oracle::exhaustive_best(batching, weights, cfg.oracle_cap,
                                                cfg.ga.evaluation_threads);
      json out = {{"sequence", best.best_sequence.sequence},
                  {"value", best.best_value},
                  {"optima_count", best.optima_count},
                  {"enumerated", best.enumerated},
                  {"weights", weights}};
      write_output(o.output, out.dump(2));
      return 0;
    }
    if (*report) {
      const auto run = artifacts_from_json(json::parse(read_input(o.input)));
      write_output(o.output, render_report(run, report_format_from_string(report_format)));
      return 0;
    }
    if (*serve) {
      auto runs = service::load_runs(artifacts_dir);
      if (runs.empty()) throw Error(ErrorCode::ConfigError, "no run artifacts in " + artifacts_dir);
      const fs::path log_path =
          event_log.empty() ? fs::path(artifacts_dir) / "events.jsonl" : fs::path(event_log);
      service::ControlService svc(std::move(runs), log_path);
      service::HttpFrontend frontend(svc);
      if (frontend.bind(host, port) < 0) {
        throw Error(ErrorCode::ConfigError, "cannot bind " + host + ":" + std::to_string(port));
      }
      g_frontend = &frontend;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving on http://" << host << ":" << port << "\n";
      frontend.listen();
      g_frontend = nullptr;
      return 0;
    }
  } catch (const io::InvalidOrderBookError& e) {
    json out = e.report();
    std::cerr << e.what() << "\n" << out.dump(2) << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
