#pragma once

#include <cstdint>
#include <vector>

#include "hapsim/sim/simulator.hpp"

namespace hapsim::analytics {

using sim::Micros;

enum class Airtime { Idle, Success, Collision, Cfp, Beacon };

/// Integer-microsecond channel time ledger.
struct AirtimeLedger {
  Micros idle = 0;
  Micros success = 0;
  Micros collision = 0;
  Micros cfp = 0;
  Micros beacon = 0;

  Micros& operator[](Airtime a);
  Micros operator[](Airtime a) const;
  Micros total() const { return idle + success + collision + cfp + beacon; }
};

struct RunMetrics {
  double wifi_aggregate_bps = 0;
  double lte_aggregate_bps = 0;
  double total_bps = 0;
  double per_user_wifi_bps = 0;
  double per_user_lte_bps = 0;
  double collision_rate = 0;
  double airtime_idle = 0;
  double airtime_success = 0;
  double airtime_collision = 0;
  double airtime_cfp = 0;
  double airtime_beacon = 0;
  AirtimeLedger ledger;
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;
  std::vector<double> wifi_station_bps;
  std::vector<double> lte_user_bps;
};

class MetricsAccumulator {
 public:
  MetricsAccumulator(int n_wifi, int m_lte, Micros duration);

  void add_wifi_bits(std::size_t station, std::uint64_t bits) { wifi_bits_.at(station) += bits; }
  void add_lte_bits(std::size_t user, double bits) { lte_bits_.at(user) += bits; }
  void count_success() { ++successes_; }
  void count_collision() { ++collisions_; }

  AirtimeLedger& ledger() { return ledger_; }
  const AirtimeLedger& ledger() const { return ledger_; }
  Micros duration() const { return duration_; }
  const std::vector<std::uint64_t>& wifi_bits() const { return wifi_bits_; }
  const std::vector<double>& lte_bits() const { return lte_bits_; }

  /// Throughputs are only formed here, from bits over the full duration.
  RunMetrics finalize() const;

 private:
  std::vector<std::uint64_t> wifi_bits_;
  std::vector<double> lte_bits_;
  AirtimeLedger ledger_;
  std::uint64_t successes_ = 0;
  std::uint64_t collisions_ = 0;
  Micros duration_;
};

}  // namespace hapsim::analytics
