#include "hapsim/sim/simulator.hpp"

#include <ostream>
#include <string>

#include "hapsim/error.hpp"

namespace hapsim::sim {
namespace {

void fnv_mix(std::uint64_t& h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xFFU;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::TxEnd: return "tx-end";
    case EventKind::TxopEnd: return "txop-end";
    case EventKind::CfpEnd: return "cfp-end";
    case EventKind::Beacon: return "beacon";
    case EventKind::TxopStart: return "txop-start";
    case EventKind::SlotBoundary: return "slot-boundary";
    case EventKind::Timer: return "timer";
  }
  return "unknown";
}

void write_trace(std::ostream& os, const TraceSummary& summary) {
  for (const auto& r : summary.records) {
    os << r.time << ',' << to_string(r.kind) << ',' << r.target << '\n';
  }
}

EventHandle Simulator::schedule(Micros time, EventKind kind, std::uint32_t target, Action action) {
  if (time < clock_) {
    throw SchedulingError("event at t=" + std::to_string(time) + " precedes clock " +
                          std::to_string(clock_));
  }
  const std::uint64_t seq = next_seq_++;
  status_.push_back(Status::Pending);
  queue_.push(Entry{SimEvent{time, seq, kind, target}, std::move(action)});
  return EventHandle{seq};
}

bool Simulator::cancel(EventHandle handle) {
  if (!pending(handle)) return false;
  status_[handle.seq] = Status::Cancelled;
  return true;
}

bool Simulator::pending(EventHandle handle) const {
  return handle.seq < status_.size() && status_[handle.seq] == Status::Pending;
}

const TraceSummary& Simulator::run_until(Micros t_end) {
  if (t_end < clock_) {
    throw SchedulingError("run_until(" + std::to_string(t_end) + ") precedes clock " +
                          std::to_string(clock_));
  }
  while (!queue_.empty() && queue_.top().event.time <= t_end) {
    // priority_queue::top is const; the entry is popped right after.
    Entry entry = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    auto& st = status_[entry.event.seq];
    if (st == Status::Cancelled) continue;
    st = Status::Fired;

    clock_ = entry.event.time;
    ++summary_.events_processed;
    fnv_mix(summary_.hash, static_cast<std::uint64_t>(entry.event.time));
    fnv_mix(summary_.hash, static_cast<std::uint64_t>(entry.event.kind));
    fnv_mix(summary_.hash, entry.event.target);
    if (record_) summary_.records.push_back({entry.event.time, entry.event.kind, entry.event.target});

    if (entry.action) entry.action();
  }
  clock_ = t_end;
  summary_.clock = clock_;
  return summary_;
}

}  // namespace hapsim::sim
