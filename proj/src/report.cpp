#include "kernelcut/report.hpp"

#include <iomanip>
#include <sstream>

#include "kernelcut/error.hpp"

namespace kernelcut {

namespace {

std::string number(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string pad(const std::string& s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

}  // namespace

ReportFormat report_format_from_string(std::string_view name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  throw Error(ErrorCode::ParseError, "unknown report format \"" + std::string(name) + "\"");
}

std::string render_report(const RunArtifacts& a, ReportFormat format) {
  const bool md = format == ReportFormat::Markdown;
  std::ostringstream out;
  auto heading = [&](const std::string& title) {
    if (md) {
      out << "## " << title << "\n\n";
    } else {
      out << title << "\n" << std::string(title.size(), '-') << "\n";
    }
  };

  if (md) {
    out << "# Cutting work-centre plan\n\n";
  } else {
    out << "Cutting work-centre plan\n========================\n";
  }
  const std::string bullet = md ? "- " : "";
  out << bullet << "orders: " << a.order_digest << "\n"
      << bullet << "config: " << a.config_digest << " (seed " << a.config.ga.seed << ")\n"
      << bullet << "weights: alpha=" << number(a.weights.alpha)
      << " beta=" << number(a.weights.beta) << "\n"
      << bullet << "fitness: F1=" << a.fitness.f1 << " F2=" << a.fitness.f2
      << " combined=" << number(a.fitness.combined) << "\n"
      << bullet << "batches: " << a.batching.fpr_batches.size() << " FPR batches, "
      << a.batching.mb_count() << " manufacturing batches\n"
      << bullet << "ga: " << a.ga.generations_run << " generations ("
      << ga::to_string(a.ga.termination_reason) << ")\n";
  if (!a.batching.excluded_kernel_ids.empty()) {
    out << bullet << "oversize kernels cut elsewhere: " << join(a.batching.excluded_kernel_ids, ", ")
        << "\n";
  }
  out << "\n";

  heading("Policy comparison");
  if (md) {
    out << "| policy | setups | max_wip_same_fpr | max_pallets_open |\n"
        << "|---|---:|---:|---:|\n";
    for (const auto& r : a.comparison.rows) {
      out << "| " << r.policy << " | " << r.setups << " | " << r.max_wip_same_fpr << " | "
          << r.max_pallets_open << " |\n";
    }
  } else {
    out << pad("policy", 20) << pad("setups", 8, true) << pad("max_wip_same_fpr", 18, true)
        << pad("max_pallets_open", 18, true) << "\n";
    for (const auto& r : a.comparison.rows) {
      out << pad(r.policy, 20) << pad(std::to_string(r.setups), 8, true)
          << pad(std::to_string(r.max_wip_same_fpr), 18, true)
          << pad(std::to_string(r.max_pallets_open), 18, true) << "\n";
    }
  }
  out << "\n";

  heading("Schedule");
  if (md) out << "| pos | mb_id | thickness | fprb |\n|---:|---|---:|---|\n";
  else out << "pos | mb_id | thickness | fprb\n";
  for (std::size_t p = 0; p < a.schedule.sequence.size(); ++p) {
    const auto& mb = a.batching.manufacturing_batches.at(a.batching.index_of(a.schedule.sequence[p]));
    const auto& label = a.batching.fpr_batches.at(mb.fprb_index).label;
    if (md) out << "| ";
    out << p << " | " << mb.mb_id << " | " << format_thickness(mb.thickness) << " | " << label;
    out << (md ? " |\n" : "\n");
  }
  out << "\n";

  heading("Pallet timeline (limit " + std::to_string(a.timeline.limit) + ")");
  if (md) out << "| pos | open | pallets | |\n|---:|---:|---|---|\n";
  else out << "pos | open | pallets\n";
  std::size_t next_violation = 0;
  for (std::size_t p = 0; p < a.timeline.open.size(); ++p) {
    const bool over = next_violation < a.timeline.violations.size() &&
                      a.timeline.violations[next_violation] == p;
    if (over) ++next_violation;
    const auto& open = a.timeline.open[p];
    if (md) {
      out << "| " << p << " | " << open.size() << " | " << join(open, " ") << " | "
          << (over ? "**OVER LIMIT**" : "") << " |\n";
    } else {
      out << p << " | " << open.size() << " | " << join(open, " ") << (over ? "  !! OVER LIMIT" : "")
          << "\n";
    }
  }
  out << "\n";
  if (a.timeline.violations.empty()) {
    out << (md ? "**pallet limit respected**" : "pallet limit respected") << " (max open "
        << a.timeline.max_open << " of " << a.timeline.limit << ")\n";
  } else {
    std::vector<std::string> at;
    for (auto p : a.timeline.violations) at.push_back(std::to_string(p));
    out << (md ? "**pallet limit exceeded**" : "pallet limit exceeded") << " (max open "
        << a.timeline.max_open << " of " << a.timeline.limit << ") at positions " << join(at, ", ")
        << "\n";
  }
  return out.str();
}

}  // namespace kernelcut
