#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <string_view>
#include <vector>

#include "hapsim/sim/rng.hpp"

namespace hapsim::sim {

/// Simulated time in integer microseconds.
using Micros = std::int64_t;

/// Same-time events are delivered in enumerator order: channel-state changes
/// first, then slot boundaries, then timers.
enum class EventKind : std::uint8_t {
  TxEnd = 0,
  TxopEnd,
  CfpEnd,
  Beacon,
  TxopStart,
  SlotBoundary,
  Timer,
};

std::string_view to_string(EventKind kind);

struct SimEvent {
  Micros time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Timer;
  std::uint32_t target = 0;
};

struct EventHandle {
  std::uint64_t seq = 0;
};

struct TraceRecord {
  Micros time;
  EventKind kind;
  std::uint32_t target;
};

struct TraceSummary {
  std::uint64_t events_processed = 0;
  Micros clock = 0;
  /// FNV-1a over (time, kind, target) of every processed event.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  std::vector<TraceRecord> records;
};

/// Writes one "time,kind,target" line per recorded event.
void write_trace(std::ostream& os, const TraceSummary& summary);

class Simulator {
 public:
  using Action = std::function<void()>;

  explicit Simulator(std::uint64_t root_seed = 0) : rng_(root_seed) {}

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  Micros now() const { return clock_; }

  /// Throws SchedulingError if time < now().
  EventHandle schedule(Micros time, EventKind kind, std::uint32_t target, Action action);
  /// Returns false if the event already fired or was cancelled.
  bool cancel(EventHandle handle);
  bool pending(EventHandle handle) const;

  /// Processes every event with time <= t_end, then sets the clock to t_end.
  const TraceSummary& run_until(Micros t_end);

  RngStream fork_rng(std::string_view stream_id) { return rng_.fork(stream_id); }
  std::uint64_t root_seed() const { return rng_.root_seed(); }

  void record_trace(bool on) { record_ = on; }
  const TraceSummary& summary() const { return summary_; }

 private:
  enum class Status : std::uint8_t { Pending, Fired, Cancelled };

  struct Entry {
    SimEvent event;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.event.time != b.event.time) return a.event.time > b.event.time;
      if (a.event.kind != b.event.kind) return a.event.kind > b.event.kind;
      return a.event.seq > b.event.seq;
    }
  };

  Micros clock_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::vector<Status> status_;
  RngRegistry rng_;
  bool record_ = false;
  TraceSummary summary_;
};

}  // namespace hapsim::sim
