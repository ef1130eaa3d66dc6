#include "hapsim/wifi/dcf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hapsim/error.hpp"

namespace hapsim::wifi {

Micros MacTiming::slot() const { return to_event_grid(slot_us); }

void MacTiming::validate() const {
  if (!(slot_us > 0 && sifs_us > 0 && difs_us > 0 && propagation_delay_us >= 0)) {
    throw ConfigError("mac: slot, sifs and difs must be positive");
  }
  if (phy_header_bits <= 0 || mac_header_bits <= 0 || ack_bits <= 0 || rts_bits <= 0 ||
      cts_bits <= 0 || payload_bytes <= 0) {
    throw ConfigError("mac: frame sizes must be positive");
  }
  if (!(channel_bit_rate_bps > 0)) throw ConfigError("mac.channel_bit_rate_bps must be > 0");
  if (cw_min < 2) throw ConfigError("mac.cw_min must be >= 2");
  if (max_backoff_stage < 0 || max_backoff_stage > 20) {
    throw ConfigError("mac.max_backoff_stage must lie in [0, 20]");
  }
  if (static_cast<long long>(cw_min) << max_backoff_stage != cw_max) {
    throw ConfigError("mac: cw_max must equal cw_min * 2^max_backoff_stage");
  }
}

std::string_view to_string(AccessMode mode) {
  return mode == AccessMode::Basic ? "basic" : "rts-cts";
}

AccessMode parse_access_mode(std::string_view text) {
  if (text == "basic") return AccessMode::Basic;
  if (text == "rts-cts") return AccessMode::RtsCts;
  throw ConfigError("unknown access mode '" + std::string(text) + "'");
}

ExchangeDurations exchange_durations(AccessMode mode, const MacTiming& t) {
  const double us_per_bit = 1e6 / t.channel_bit_rate_bps;
  const double data = (t.phy_header_bits + t.mac_header_bits + t.payload_bits()) * us_per_bit;
  const double ack = (t.ack_bits + t.phy_header_bits) * us_per_bit;
  const double delta = t.propagation_delay_us;
  if (mode == AccessMode::Basic) {
    return {t.difs_us + data + delta + t.sifs_us + ack + delta, t.difs_us + data + delta};
  }
  const double rts = (t.rts_bits + t.phy_header_bits) * us_per_bit;
  const double cts = (t.cts_bits + t.phy_header_bits) * us_per_bit;
  return {t.difs_us + rts + delta + t.sifs_us + cts + delta + t.sifs_us + data + delta +
              t.sifs_us + ack + delta,
          t.difs_us + rts + delta};
}

Micros to_event_grid(double us) {
  // Absorb floating-point noise on values that are integral in exact arithmetic.
  return static_cast<Micros>(std::ceil(us - 1e-9));
}

ExchangeAirtime exchange_airtime(AccessMode mode, const MacTiming& timing) {
  const auto d = exchange_durations(mode, timing);
  return {to_event_grid(d.success_us), to_event_grid(d.collision_us)};
}

int contention_window(int stage, const MacTiming& timing) {
  if (stage < 0) throw Error("contention_window: negative stage");
  if (stage >= timing.max_backoff_stage) return timing.cw_max;
  return std::min(timing.cw_min << stage, timing.cw_max);
}

int draw_backoff(int stage, const MacTiming& timing, sim::RngStream& rng) {
  return static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(contention_window(stage, timing))));
}

WifiStation make_station(std::uint32_t id, AccessMode mode, const MacTiming& timing,
                         sim::RngStream rng) {
  WifiStation s;
  s.id = id;
  s.mode = mode;
  s.rng = rng;
  s.counter = draw_backoff(0, timing, s.rng);
  return s;
}

std::vector<std::size_t> ready_stations(std::span<const WifiStation> stations) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    if (stations[i].counter == 0) out.push_back(i);
  }
  return out;
}

void idle_slot(std::span<WifiStation> stations) {
  for (auto& s : stations) --s.counter;
}

void busy_slot(std::span<WifiStation> stations, std::span<const std::size_t> transmitters) {
  for (std::size_t i = 0; i < stations.size(); ++i) {
    if (stations[i].counter > 0 && std::find(transmitters.begin(), transmitters.end(), i) == transmitters.end()) {
      --stations[i].counter;
    }
  }
}

void complete_exchange(WifiStation& station, bool success, const MacTiming& timing) {
  station.stage = success ? 0 : std::min(station.stage + 1, timing.max_backoff_stage);
  station.counter = draw_backoff(station.stage, timing, station.rng);
}

DcfStepResult dcf_step(std::span<WifiStation> stations, MediumState medium,
                       const ExchangeAirtime& airtime) {
  DcfStepResult r;
  if (medium == MediumState::Busy) return r;
  r.transmitters = ready_stations(stations);
  if (r.transmitters.empty()) {
    idle_slot(stations);
    r.outcome = SlotOutcome::Idle;
  } else if (r.transmitters.size() == 1) {
    r.outcome = SlotOutcome::Success;
    r.duration = airtime.success;
  } else {
    r.outcome = SlotOutcome::Collision;
    r.duration = airtime.collision;
  }
  return r;
}

}  // namespace hapsim::wifi
