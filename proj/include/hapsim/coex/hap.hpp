#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hapsim/radio/radio_env.hpp"
#include "hapsim/sim/simulator.hpp"

namespace hapsim::coex {

using sim::Micros;

inline constexpr Micros kTxopGranularity = 32;
inline constexpr Micros kTxopMin = 32;
inline constexpr Micros kTxopMax = 8160;
inline constexpr int kSubframesPerFrame = 10;

/// uca: control stays on the licensed carrier, the CFP carries data only.
/// standalone: shortened LTE frames with sync header and trailing ACK.
enum class LteMode { Uca, Standalone };

std::string_view to_string(LteMode mode);

struct SuperframeConfig {
  Micros repetition_interval = 100'000;
  Micros beacon_duration = 500;
  Micros subframe = 1000;
  Micros header = 32;  // standalone sync header before each shortened frame
  Micros ack = 32;     // standalone ACK at the end of each TXOP

  void validate() const;
};

struct Superframe {
  Micros repetition_interval = 0;
  Micros beacon_duration = 0;
  Micros cfp_length = 0;
  Micros cp_length = 0;
};

struct TxopGrant {
  std::uint32_t user = 0;
  Micros start = 0;
  Micros duration = 0;
  /// Data-bearing subframes. Standalone: the shortened frame length n.
  /// UCA: whole subframes covered by the grant (a trailing partial subframe
  /// is carried pro rata).
  int active_subframes = 0;
  Micros end() const { return start + duration; }
};

struct TxopSlot {
  Micros start = 0;
  Micros max_length = 0;
};

/// Broadcast at the start of each superframe.
struct Beacon {
  Micros time_stamp = 0;
  Micros cfp_length = 0;
  std::vector<TxopSlot> txop_schedule;
};

struct ShortenedFrame {
  int active_subframes = 0;
  std::array<bool, kSubframesPerFrame> subframe_mask{};
  Micros header_overhead = 0;
  Micros ack_overhead = 0;

  /// header + n subframes + ack on the 32 us TXOP grid.
  Micros txop_duration(Micros subframe) const;
};

struct DtxDrxCycle {
  int active = 0;
  int sleep() const { return kSubframesPerFrame - active; }
};

struct SuperframePlan {
  Superframe frame;
  Beacon beacon;
  std::vector<TxopGrant> grants;
  Micros beacon_start = 0;
  Micros cfp_start = 0;
  Micros cfp_end = 0;
  /// CFP airtime nominally available, (interval - beacon) * M / (M + N).
  Micros cfp_budget = 0;
};

/// Smallest multiple of 32 us not below the request. Throws for requests
/// outside (0, 8160].
Micros round_txop(Micros requested);

/// Standalone: 6 <= n <= 8 with subframes 0 and 5 active. UCA: 1 <= n <= 10.
ShortenedFrame shorten_frame(int n, LteMode mode, const SuperframeConfig& cfg = {});

/// floor((interval - beacon) * M / (M + N)).
Micros cfp_budget(int m_lte, int n_wifi, const SuperframeConfig& cfg);

/// Throws std::logic_error if grants overlap, leave the CFP, or break the
/// TXOP granularity and bounds.
void check_grants(const SuperframePlan& plan);

/// Central CFP/CP scheduler run by the HAP once per repetition interval.
/// Keeps round-robin position and per-user DTX/DRX sleep across superframes.
class HapScheduler {
 public:
  HapScheduler(int m_lte, int n_wifi, LteMode mode, SuperframeConfig cfg = {});

  /// Plans the superframe whose nominal start is tbtt. The beacon may start
  /// late if a CP exchange was still on air; the lost time comes out of the CFP.
  SuperframePlan plan(Micros tbtt, Micros beacon_start);

  LteMode mode() const { return mode_; }
  const SuperframeConfig& config() const { return cfg_; }
  int lte_users() const { return m_; }
  int wifi_users() const { return n_; }
  Micros budget() const { return budget_; }
  Micros eligible_from(std::uint32_t user) const { return eligible_from_.at(user); }

 private:
  void pack_standalone(SuperframePlan& plan, Micros cfp_limit);
  void pack_uca(SuperframePlan& plan, Micros cfp_limit);

  int m_;
  int n_;
  LteMode mode_;
  SuperframeConfig cfg_;
  Micros budget_;
  std::uint32_t next_user_ = 0;
  std::vector<Micros> eligible_from_;
};

/// First superframe of a fresh scheduler, beacon on time at t = 0.
SuperframePlan build_superframe(int m_lte, int n_wifi, LteMode mode,
                                const SuperframeConfig& cfg = {});

/// Bits carried by `subframes` full subframes plus a trailing fraction, each
/// subframe at lte_rate(mean_snr * gain()) with a fresh gain per subframe.
template <class GainFn>
double deliver_subframes(double subframes, double mean_snr, Micros subframe,
                         const radio::ChannelParams& params, GainFn&& gain) {
  double bits = 0.0;
  const double seconds = static_cast<double>(subframe) * 1e-6;
  for (double left = subframes; left > 0.0; left -= 1.0) {
    const double share = left >= 1.0 ? 1.0 : left;
    bits += radio::lte_rate(mean_snr * gain(), params) * seconds * share;
  }
  return bits;
}

/// Payload delivered by one CFP grant. Other radios are muted for its whole
/// duration, so nothing is lost to collisions.
template <class GainFn>
double cfp_transmit(const TxopGrant& grant, LteMode mode, double mean_snr,
                    const SuperframeConfig& cfg, const radio::ChannelParams& params,
                    GainFn&& gain) {
  const double subframes =
      mode == LteMode::Standalone
          ? static_cast<double>(grant.active_subframes)
          : static_cast<double>(grant.duration) / static_cast<double>(cfg.subframe);
  return deliver_subframes(subframes, mean_snr, cfg.subframe, params, gain);
}

}  // namespace hapsim::coex
