#pragma once

#include <cstdint>
#include <vector>

#include "hapsim/analytics/metrics.hpp"
#include "hapsim/analytics/report.hpp"
#include "hapsim/coex/hap.hpp"
#include "hapsim/fsm/signalling.hpp"
#include "hapsim/scenario/config.hpp"
#include "hapsim/sim/simulator.hpp"

namespace hapsim::scenario {

enum class RadioSystem { Wifi, Lte };

struct Transmission {
  Micros start = 0;
  Micros end = 0;
  RadioSystem system = RadioSystem::Wifi;
  std::uint32_t node = 0;
  bool success = false;
};

struct Interval {
  Micros start = 0;
  Micros end = 0;
};

struct RunOptions {
  /// Per-transmission log and CFP/CP intervals, for isolation checks.
  bool keep_transmissions = false;
  /// Per-event (time, kind, target) records; the trace hash is always kept.
  bool keep_event_trace = false;
  /// Signalling conformance trace (HAP schemes only).
  bool keep_signalling = true;
};

struct SuperframeRecord {
  coex::Superframe frame;
  Micros beacon_start = 0;
  Micros cfp_start = 0;
  Micros cfp_end = 0;
  Micros cfp_budget = 0;
  std::vector<coex::TxopGrant> grants;
};

struct RunResult {
  analytics::RunMetrics metrics;
  analytics::ResultRow row;
  sim::TraceSummary trace;
  std::vector<Transmission> transmissions;
  std::vector<Interval> cfp_intervals;
  std::vector<Interval> cp_intervals;
  std::vector<fsm::SignallingRecord> signalling;
  std::vector<SuperframeRecord> superframes;
};

/// Runs one seed of the scenario on a single shared channel.
RunResult simulate(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& options = {});

struct IsolationReport {
  std::size_t wifi_overlapping_cfp = 0;
  std::size_t lte_overlapping_cp = 0;
  std::size_t wifi_transmissions = 0;
  std::size_t lte_transmissions = 0;
};

/// Counts transmissions that overlap the other system's period.
IsolationReport check_isolation(const RunResult& result);

/// Number of successful transmissions that overlap any other transmission.
std::size_t count_success_overlaps(const std::vector<Transmission>& transmissions);

}  // namespace hapsim::scenario
