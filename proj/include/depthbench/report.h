#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "depthbench/evaluation.h"

namespace depthbench {

enum class ReportFormat { kJson, kCsv, kMarkdown };

/// Comma-separated subset of "json,csv,markdown".
std::vector<ReportFormat> ParseReportFormats(const std::string& text);

/// Rank columns shown in the CSV and markdown tables: AbsRel, F-Score and
/// Boundary/F-Score, whichever the report contains.
std::vector<std::string> KeyRankMetrics(const MetricReport& report);

/// Throws unless every rank column is a dense ranking of the rounded
/// aggregates under its direction, and the report has at least one method.
void ValidateReport(const MetricReport& report);

nlohmann::ordered_json ReportToJson(const MetricReport& report);
MetricReport ReportFromJson(const nlohmann::ordered_json& json);

std::string FormatCsv(const MetricReport& report);
std::string FormatMarkdown(const MetricReport& report);

/// Validates the report and writes report.json / report.csv / report.md into
/// `directory`. Returns the written paths.
std::vector<std::filesystem::path> EmitReport(const MetricReport& report,
                                              const std::filesystem::path& directory,
                                              const std::vector<ReportFormat>& formats);

}  // namespace depthbench
