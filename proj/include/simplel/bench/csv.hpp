#pragma once

#include "simplel/bench/experiment.hpp"
#include "simplel/conditions.hpp"
#include "simplel/rules.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace simplel::bench
{

inline constexpr const char* kRawHeader = "level,seed,rule,alpha_star,interior,J,selected_error,min_error";
inline constexpr const char* kCellHeader = "level,seed,C1,C2,D,clamped,bregman_evaluations";

/// Numbers are written with 17 significant digits so reading back is exact.
void write_raw_csv(std::ostream& out, const std::vector<RawRecord>& records);
std::vector<RawRecord> read_raw_csv(std::istream& in);

void write_cell_csv(std::ostream& out, const std::vector<CellSummary>& cells);
std::vector<CellSummary> read_cell_csv(std::istream& in);

// Curves for a single dataset.
void write_path_csv(std::ostream& out, const PathCurve<double>& path);
void write_error_csv(std::ostream& out, const ErrorCurve<double>& curve);
void write_rule_csv(std::ostream& out, const std::vector<RuleCurve<double>>& curves);
void write_condition_csv(std::ostream& out, const std::vector<ConditionReport<double>>& reports);

/// Parses one CSV line without quoting support; fields never contain commas here.
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace simplel::bench
