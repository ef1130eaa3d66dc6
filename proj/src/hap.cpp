#include "hapsim/coex/hap.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "hapsim/error.hpp"

namespace hapsim::coex {
namespace {

constexpr int kPreferredActive[] = {8, 7, 6};

}  // namespace

std::string_view to_string(LteMode mode) { return mode == LteMode::Uca ? "uca" : "standalone"; }

void SuperframeConfig::validate() const {
  if (repetition_interval <= 0) throw ConfigError("superframe.repetition_interval_us must be > 0");
  if (beacon_duration < 0 || beacon_duration >= repetition_interval) {
    throw ConfigError("superframe.beacon_us must lie in [0, repetition_interval_us)");
  }
  if (subframe <= 0) throw ConfigError("superframe.subframe_us must be > 0");
  if (header < 0 || ack < 0) throw ConfigError("superframe: header_us and ack_us must be >= 0");
}

Micros round_txop(Micros requested) {
  if (requested <= 0 || requested > kTxopMax) {
    throw Error("TXOP of " + std::to_string(requested) + " us outside (0, 8160]");
  }
  return (requested + kTxopGranularity - 1) / kTxopGranularity * kTxopGranularity;
}

Micros ShortenedFrame::txop_duration(Micros subframe) const {
  return round_txop(header_overhead + active_subframes * subframe + ack_overhead);
}

ShortenedFrame shorten_frame(int n, LteMode mode, const SuperframeConfig& cfg) {
  const bool standalone = mode == LteMode::Standalone;
  const int lo = standalone ? 6 : 1;
  const int hi = standalone ? 8 : kSubframesPerFrame;
  if (n < lo || n > hi) {
    throw Error("shortened frame of " + std::to_string(n) + " subframes outside [" +
                std::to_string(lo) + ", " + std::to_string(hi) + "] for " +
                std::string(to_string(mode)) + " mode");
  }
  ShortenedFrame f;
  f.active_subframes = n;
  for (int i = 0; i < n; ++i) f.subframe_mask[static_cast<std::size_t>(i)] = true;
  if (standalone) {
    f.header_overhead = cfg.header;
    f.ack_overhead = cfg.ack;
  }
  return f;
}

Micros cfp_budget(int m_lte, int n_wifi, const SuperframeConfig& cfg) {
  if (m_lte < 0 || n_wifi < 0 || m_lte + n_wifi == 0) {
    throw Error("cfp_budget: need M, N >= 0 and M + N > 0");
  }
  const Micros usable = cfg.repetition_interval - cfg.beacon_duration;
  return usable * m_lte / (m_lte + n_wifi);
}

void check_grants(const SuperframePlan& plan) {
  Micros cursor = plan.cfp_start;
  for (const auto& g : plan.grants) {
    if (g.duration % kTxopGranularity != 0 || g.duration < kTxopMin || g.duration > kTxopMax) {
      throw std::logic_error("grant duration " + std::to_string(g.duration) +
                             " us violates TXOP granularity or bounds");
    }
    if (g.start < cursor) {
      throw std::logic_error("overlapping TXOP grants at t=" + std::to_string(g.start));
    }
    cursor = g.end();
  }
  if (cursor > plan.cfp_end) throw std::logic_error("TXOP grant extends past the CFP");
}

HapScheduler::HapScheduler(int m_lte, int n_wifi, LteMode mode, SuperframeConfig cfg)
    : m_(m_lte),
      n_(n_wifi),
      mode_(mode),
      cfg_(cfg),
      budget_(cfp_budget(m_lte, n_wifi, cfg)),
      eligible_from_(static_cast<std::size_t>(m_lte), 0) {
  cfg_.validate();
}

SuperframePlan HapScheduler::plan(Micros tbtt, Micros beacon_start) {
  if (beacon_start < tbtt) throw Error("beacon cannot precede its target beacon time");
  SuperframePlan p;
  p.beacon_start = beacon_start;
  p.cfp_start = beacon_start + cfg_.beacon_duration;
  p.cfp_end = p.cfp_start;
  p.cfp_budget = budget_;
  const Micros cfp_limit = tbtt + cfg_.beacon_duration + budget_;

  if (m_ > 0 && cfp_limit > p.cfp_start) {
    if (mode_ == LteMode::Standalone) {
      pack_standalone(p, cfp_limit);
    } else {
      pack_uca(p, cfp_limit);
    }
  }
  if (!p.grants.empty()) p.cfp_end = p.grants.back().end();

  p.frame.repetition_interval = cfg_.repetition_interval;
  p.frame.beacon_duration = cfg_.beacon_duration;
  p.frame.cfp_length = p.cfp_end - p.cfp_start;
  p.frame.cp_length = cfg_.repetition_interval - cfg_.beacon_duration - p.frame.cfp_length;

  p.beacon.time_stamp = beacon_start;
  p.beacon.cfp_length = p.frame.cfp_length;
  for (const auto& g : p.grants) p.beacon.txop_schedule.push_back({g.start, g.duration});

  check_grants(p);
  return p;
}

void HapScheduler::pack_standalone(SuperframePlan& p, Micros cfp_limit) {
  Micros cursor = p.cfp_start;
  const auto m = static_cast<std::uint32_t>(m_);
  for (;;) {
    int n = 0;
    Micros length = 0;
    for (int candidate : kPreferredActive) {
      const Micros d = shorten_frame(candidate, mode_, cfg_).txop_duration(cfg_.subframe);
      if (cursor + d <= cfp_limit) {
        n = candidate;
        length = d;
        break;
      }
    }
    if (n == 0) break;

    // Next user in round-robin order that has finished its DTX/DRX sleep.
    std::uint32_t user = m;
    Micros earliest = INT64_MAX;
    for (std::uint32_t k = 0; k < m; ++k) {
      const std::uint32_t u = (next_user_ + k) % m;
      if (eligible_from_[u] <= cursor) {
        user = u;
        break;
      }
      earliest = std::min(earliest, eligible_from_[u]);
    }
    if (user == m) {
      // Everyone is asleep; leave a gap in the CFP and retry when the first wakes.
      if (earliest >= cfp_limit) break;
      cursor = earliest;
      continue;
    }

    p.grants.push_back({user, cursor, length, n});
    eligible_from_[user] = cursor + length + (kSubframesPerFrame - n) * cfg_.subframe;
    next_user_ = (user + 1) % m;
    cursor += length;
  }
}

void HapScheduler::pack_uca(SuperframePlan& p, Micros cfp_limit) {
  const Micros share = (cfp_limit - p.cfp_start) / m_;
  if (share < kTxopMin) return;
  const Micros chunks = (share + kTxopMax - 1) / kTxopMax;
  const Micros length = share / chunks / kTxopGranularity * kTxopGranularity;
  if (length < kTxopMin) return;

  Micros cursor = p.cfp_start;
  const auto m = static_cast<std::uint32_t>(m_);
  for (std::uint32_t k = 0; k < m; ++k) {
    const std::uint32_t u = (next_user_ + k) % m;
    for (Micros c = 0; c < chunks; ++c) {
      p.grants.push_back({u, cursor, length, static_cast<int>(length / cfg_.subframe)});
      cursor += length;
    }
  }
  next_user_ = (next_user_ + 1) % m;
}

SuperframePlan build_superframe(int m_lte, int n_wifi, LteMode mode, const SuperframeConfig& cfg) {
  HapScheduler scheduler(m_lte, n_wifi, mode, cfg);
  return scheduler.plan(0, 0);
}

}  // namespace hapsim::coex
