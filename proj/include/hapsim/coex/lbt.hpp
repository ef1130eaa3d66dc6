#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "hapsim/coex/hap.hpp"
#include "hapsim/radio/radio_env.hpp"
#include "hapsim/sim/rng.hpp"
#include "hapsim/wifi/dcf.hpp"

namespace hapsim::coex {

struct LbtParams {
  Micros cca = 50;
  int contention_window = 16;
  Micros burst = 8064;
  int burst_subframes = 8;
  /// Deferral after each burst. Unset means burst * (M + N - 1), which holds
  /// every LTE node to a 1 / (M + N) airtime share.
  std::optional<Micros> duty_off;

  void validate() const;
};

Micros resolve_duty_off(const LbtParams& params, int m_lte, int n_wifi);

enum class LbtState { Sensing, Backoff, Transmitting, Deferring };

std::string_view to_string(LbtState state);

struct LbtNode {
  std::uint32_t id = 0;
  LbtState state = LbtState::Sensing;
  /// Idle slots still needed to complete CCA while sensing.
  int cca_slots_left = 0;
  int counter = 0;
  Micros duty_off = 0;
  sim::RngStream rng;
};

LbtNode make_lbt_node(std::uint32_t id, const LbtParams& params, Micros duty_off, Micros slot,
                      sim::RngStream rng);

/// Counter reached zero while in backoff.
inline bool lbt_ready(const LbtNode& node) {
  return node.state == LbtState::Backoff && node.counter == 0;
}

/// One idle slot on the shared slot clock.
void lbt_idle_slot(LbtNode& node, const LbtParams& params);

/// Another radio's exchange ended on a slot boundary; a node in backoff
/// decrements once, as Wi-Fi stations do.
void lbt_busy_slot(LbtNode& node);

/// The medium just went idle after a busy period whose trailing interframe
/// space already satisfies CCA.
void lbt_medium_released(LbtNode& node, const LbtParams& params);

void lbt_start_burst(LbtNode& node);
void lbt_finish_burst(LbtNode& node);
/// Duty-off expired; CCA restarts.
void lbt_wake(LbtNode& node, const LbtParams& params, Micros slot);

enum class LbtDecision { Transmit, Wait };

/// Slot-boundary decision for a node alone on the medium. Busy medium freezes
/// the node; an idle slot advances CCA or the backoff counter.
LbtDecision lbt_contend(LbtNode& node, wifi::MediumState medium, const LbtParams& params);

/// Bits of one burst; zero if it collided.
template <class GainFn>
double burst_transmit(const LbtParams& params, bool collided, double mean_snr,
                      const SuperframeConfig& cfg, const radio::ChannelParams& channel,
                      GainFn&& gain) {
  if (collided) return 0.0;
  return deliver_subframes(params.burst_subframes, mean_snr, cfg.subframe, channel, gain);
}

}  // namespace hapsim::coex
