#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentctl/eval/harness.hpp"

namespace agentctl::eval {

enum class ReportFormat { Text, Csv, ChartData };

std::optional<ReportFormat> report_format_from_string(std::string_view s) noexcept;

// text: aligned table, 2 decimals, "-" for undefined scores.
// csv: header plus one line per row, full precision, empty cells when undefined.
// chartdata: one plot payload of kind "bar" with a series per score column
// and the row names as x ticks.
std::string render_report(const std::vector<CategoryReport>& reports, ReportFormat format);

// Column headers after "Category": M_E … M_D, M_C, M_T, Time, Money.
std::vector<std::string> report_columns();

// Inverse of the csv format (numbers only, usage columns included).
std::vector<CategoryReport> parse_csv_report(std::string_view csv);

}  // namespace agentctl::eval
