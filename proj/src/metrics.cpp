#include "hapsim/analytics/metrics.hpp"

#include <numeric>

#include "hapsim/error.hpp"

namespace hapsim::analytics {

Micros& AirtimeLedger::operator[](Airtime a) {
  switch (a) {
    case Airtime::Idle: return idle;
    case Airtime::Success: return success;
    case Airtime::Collision: return collision;
    case Airtime::Cfp: return cfp;
    case Airtime::Beacon: return beacon;
  }
  return idle;
}

Micros AirtimeLedger::operator[](Airtime a) const {
  return const_cast<AirtimeLedger&>(*this)[a];
}

MetricsAccumulator::MetricsAccumulator(int n_wifi, int m_lte, Micros duration)
    : wifi_bits_(static_cast<std::size_t>(n_wifi), 0),
      lte_bits_(static_cast<std::size_t>(m_lte), 0.0),
      duration_(duration) {
  if (duration <= 0) throw Error("metrics: duration must be positive");
}

RunMetrics MetricsAccumulator::finalize() const {
  RunMetrics r;
  const double seconds = static_cast<double>(duration_) * 1e-6;
  for (auto b : wifi_bits_) r.wifi_station_bps.push_back(static_cast<double>(b) / seconds);
  for (auto b : lte_bits_) r.lte_user_bps.push_back(b / seconds);

  const std::uint64_t wifi_total = std::accumulate(wifi_bits_.begin(), wifi_bits_.end(), std::uint64_t{0});
  const double lte_total = std::accumulate(lte_bits_.begin(), lte_bits_.end(), 0.0);
  r.wifi_aggregate_bps = static_cast<double>(wifi_total) / seconds;
  r.lte_aggregate_bps = lte_total / seconds;
  r.total_bps = r.wifi_aggregate_bps + r.lte_aggregate_bps;
  r.per_user_wifi_bps = wifi_bits_.empty() ? 0.0 : r.wifi_aggregate_bps / static_cast<double>(wifi_bits_.size());
  r.per_user_lte_bps = lte_bits_.empty() ? 0.0 : r.lte_aggregate_bps / static_cast<double>(lte_bits_.size());

  const auto attempts = successes_ + collisions_;
  r.collision_rate = attempts == 0 ? 0.0 : static_cast<double>(collisions_) / static_cast<double>(attempts);
  r.successes = successes_;
  r.collisions = collisions_;

  const double total = static_cast<double>(duration_);
  r.ledger = ledger_;
  r.airtime_idle = static_cast<double>(ledger_.idle) / total;
  r.airtime_success = static_cast<double>(ledger_.success) / total;
  r.airtime_collision = static_cast<double>(ledger_.collision) / total;
  r.airtime_cfp = static_cast<double>(ledger_.cfp) / total;
  r.airtime_beacon = static_cast<double>(ledger_.beacon) / total;
  return r;
}

}  // namespace hapsim::analytics
