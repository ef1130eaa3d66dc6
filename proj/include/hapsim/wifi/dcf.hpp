#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hapsim/sim/rng.hpp"
#include "hapsim/sim/simulator.hpp"

namespace hapsim::wifi {

using sim::Micros;

/// 802.11 MAC timing and frame sizes. Defaults are the 802.11n 5 GHz set the
/// evaluation uses; every frame bit, PHY header included, goes at the
/// channel bit rate.
struct MacTiming {
  double slot_us = 9;
  double sifs_us = 16;
  double difs_us = 50;
  double propagation_delay_us = 20;
  int phy_header_bits = 192;
  int mac_header_bits = 224;
  int ack_bits = 112;  // plus PHY header
  int rts_bits = 160;  // plus PHY header
  int cts_bits = 112;  // plus PHY header
  int payload_bytes = 1500;
  double channel_bit_rate_bps = 130e6;
  int cw_min = 16;
  int cw_max = 1024;
  int max_backoff_stage = 6;

  int payload_bits() const { return payload_bytes * 8; }
  Micros slot() const;
  void validate() const;
};

enum class AccessMode { Basic, RtsCts };

std::string_view to_string(AccessMode mode);
AccessMode parse_access_mode(std::string_view text);

struct ExchangeDurations {
  double success_us = 0;
  double collision_us = 0;
};

/// Exact (fractional) airtime of one successful and one collided exchange,
/// DIFS included.
ExchangeDurations exchange_durations(AccessMode mode, const MacTiming& timing);

/// Rounds a fractional airtime up to the 1 us event grid.
Micros to_event_grid(double us);

/// Exchange durations on the event grid.
struct ExchangeAirtime {
  Micros success = 0;
  Micros collision = 0;
};
ExchangeAirtime exchange_airtime(AccessMode mode, const MacTiming& timing);

/// min(cw_min * 2^stage, cw_max).
int contention_window(int stage, const MacTiming& timing);

/// Uniform on [0, contention_window(stage) - 1].
int draw_backoff(int stage, const MacTiming& timing, sim::RngStream& rng);

/// Saturated DCF station: always holds one payload-sized frame.
struct WifiStation {
  std::uint32_t id = 0;
  int stage = 0;
  int counter = 0;
  AccessMode mode = AccessMode::Basic;
  bool saturated = true;
  sim::RngStream rng;
};

WifiStation make_station(std::uint32_t id, AccessMode mode, const MacTiming& timing,
                         sim::RngStream rng);

/// Indices of stations whose counter has reached zero.
std::vector<std::size_t> ready_stations(std::span<const WifiStation> stations);

/// One idle slot elapsed: every counter decrements.
void idle_slot(std::span<WifiStation> stations);

/// A contention exchange ended. Its trailing DIFS closes on a slot boundary,
/// so every non-transmitter with a nonzero counter decrements once.
void busy_slot(std::span<WifiStation> stations, std::span<const std::size_t> transmitters);

/// Outcome of an exchange the station took part in. Success resets the stage,
/// collision doubles the window up to the cap; a fresh counter is drawn.
void complete_exchange(WifiStation& station, bool success, const MacTiming& timing);

enum class MediumState { Idle, Busy };

enum class SlotOutcome { Blocked, Idle, Success, Collision };

struct DcfStepResult {
  SlotOutcome outcome = SlotOutcome::Blocked;
  std::vector<std::size_t> transmitters;
  Micros duration = 0;
};

/// One slot boundary for a pure Wi-Fi contention domain. Stations at zero
/// transmit; otherwise the slot is idle and counters decrement. Counters
/// stay frozen while the medium is busy.
DcfStepResult dcf_step(std::span<WifiStation> stations, MediumState medium,
                       const ExchangeAirtime& airtime);

}  // namespace hapsim::wifi
