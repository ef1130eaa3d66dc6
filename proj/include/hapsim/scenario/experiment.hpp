#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hapsim/analytics/report.hpp"
#include "hapsim/scenario/config.hpp"
#include "hapsim/scenario/coexistence.hpp"

namespace hapsim::scenario {

struct Job {
  ScenarioConfig config;
  std::uint64_t seed = 0;
};

/// Runs every job on up to `parallel` threads. Rows come back sorted by
/// (scheme, N, M, seed) whatever the completion order. Every row is checked
/// against the airtime-ledger and total-throughput invariants.
std::vector<analytics::ResultRow> run_jobs(const std::vector<Job>& jobs, int parallel);

/// One row per configured seed.
std::vector<analytics::ResultRow> run(const ScenarioConfig& config, int parallel = 1);

enum class SweepAxis { N, M };

SweepAxis parse_axis(std::string_view text);

/// Cross product of axis values, schemes and seeds.
std::vector<analytics::ResultRow> sweep(const ScenarioConfig& config, SweepAxis axis,
                                        const std::vector<int>& values,
                                        const std::vector<Scheme>& schemes, int parallel = 1);

struct OracleRow {
  int n = 0;
  double tau = 0;
  double p = 0;
  double throughput_bps = 0;
  double tau_residual = 0;
};

std::vector<OracleRow> oracle_table(const std::vector<int>& n_values, const wifi::MacTiming& timing,
                                    wifi::AccessMode mode);

}  // namespace hapsim::scenario
