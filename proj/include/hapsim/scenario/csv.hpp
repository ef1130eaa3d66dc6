#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hapsim/analytics/report.hpp"
#include "hapsim/scenario/experiment.hpp"

namespace hapsim::scenario {

/// Shortest representation that parses back to the same double.
std::string format_number(double value);

void write_results_csv(std::ostream& os, const std::vector<analytics::ResultRow>& rows);

/// Throws ConfigError naming the line on malformed input.
std::vector<analytics::ResultRow> read_results_csv(std::istream& is);

/// One line per (scheme, N, M): runs, then mean and ci95 for every metric.
void write_report_csv(std::ostream& os, const std::vector<analytics::ReportRow>& report);

void write_oracle_csv(std::ostream& os, const std::vector<OracleRow>& rows);

}  // namespace hapsim::scenario
