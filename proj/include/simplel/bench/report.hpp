#pragma once

#include "simplel/bench/experiment.hpp"

#include <string>

namespace simplel::bench
{

enum class ReportFormat
{
    Markdown,
    Csv,
    Svg
};

ReportFormat parse_report_format(const std::string& name);

/// Markdown: noise classes as rows, rules as columns, then diagnostics and notes.
/// Csv: the raw records. Svg: L-curve and rule curves of the first dataset.
std::string render_report(const ExperimentReport& report, ReportFormat format);

/// Rebuilds a report (without the SVG curves) from its config and the two CSV files.
ExperimentReport report_from_csv(const ExperimentConfig& config, std::istream& raw, std::istream& cells);

} // namespace simplel::bench
