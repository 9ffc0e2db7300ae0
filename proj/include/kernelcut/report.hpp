#pragma once

#include <string>
#include <string_view>

#include "kernelcut/pipeline.hpp"

namespace kernelcut {

enum class ReportFormat { Text, Markdown };

ReportFormat report_format_from_string(std::string_view name);

// Policy comparison, the schedule ("pos | mb_id | thickness | fprb") and the
// pallet timeline. Contains no timestamps, so identical runs render
// identically.
std::string render_report(const RunArtifacts& artifacts, ReportFormat format);

}  // namespace kernelcut
