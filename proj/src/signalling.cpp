#include "hapsim/fsm/signalling.hpp"

#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "hapsim/coex/hap.hpp"
#include "hapsim/error.hpp"

namespace hapsim::fsm {
namespace {

constexpr int kFrame = coex::kSubframesPerFrame;

[[noreturn]] void violation(std::string_view state, SigEvent event) {
  throw ProtocolViolation(std::string(state), std::string(to_string(event)));
}

void check_n(int n) {
  if (n < 1 || n > kFrame) throw Error("active subframes must lie in [1, 10]");
}

}  // namespace

std::string_view to_string(SigEvent event) {
  switch (event) {
    case SigEvent::AssocRequest: return "assoc-request";
    case SigEvent::Beacon: return "beacon";
    case SigEvent::UlGrant: return "ul-grant";
    case SigEvent::Identity: return "identity";
    case SigEvent::Rrc: return "rrc";
    case SigEvent::SubframeTick: return "subframe-tick";
    case SigEvent::PdcchPresent: return "pdcch-present";
    case SigEvent::PdcchAbsent: return "pdcch-absent";
    case SigEvent::DataRequest: return "data-request";
  }
  return "unknown";
}

std::string_view to_string(SigMessage message) {
  switch (message) {
    case SigMessage::UeIdentity: return "ue-identity";
    case SigMessage::DtxLength: return "dtx-length";
    case SigMessage::DrxLength: return "drx-length";
    case SigMessage::BufferStatus: return "buffer-status";
    case SigMessage::DataRequest: return "data-request";
    case SigMessage::Aggregate: return "aggregate";
  }
  return "unknown";
}

std::string_view to_string(Machine machine) {
  switch (machine) {
    case Machine::Uca: return "uca";
    case Machine::Dtx: return "dtx";
    case Machine::Drx: return "drx";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// UCA

std::string_view UcaFsm::name(State s) {
  switch (s) {
    case State::Idle: return "idle";
    case State::AssociationRequested: return "association-requested";
    case State::Granted: return "granted";
    case State::IdentitySent: return "identity-sent";
    case State::RrcConfigured: return "rrc-configured";
    case State::Aggregating: return "aggregating";
  }
  return "unknown";
}

StepResult UcaFsm::step(SigEvent event) {
  StepResult r;
  r.before = state_name();
  switch (state_) {
    case State::Idle:
      if (event != SigEvent::AssocRequest) violation(r.before, event);
      state_ = State::AssociationRequested;
      break;
    case State::AssociationRequested:
      if (event != SigEvent::UlGrant) violation(r.before, event);
      state_ = State::Granted;
      break;
    case State::Granted:
      if (event != SigEvent::Identity) violation(r.before, event);
      r.emitted.push_back(SigMessage::UeIdentity);
      state_ = State::IdentitySent;
      break;
    case State::IdentitySent:
      if (event != SigEvent::Rrc) violation(r.before, event);
      state_ = State::RrcConfigured;
      break;
    case State::RrcConfigured:
      // The beacon's time stamp and CFP length fix when aggregation can start.
      if (event != SigEvent::Beacon) violation(r.before, event);
      r.emitted.push_back(SigMessage::Aggregate);
      state_ = State::Aggregating;
      break;
    case State::Aggregating:
      if (event != SigEvent::Beacon && event != SigEvent::SubframeTick) violation(r.before, event);
      break;
  }
  r.after = state_name();
  return r;
}

// ---------------------------------------------------------------------------
// Standalone DTX

SaDtxFsm::SaDtxFsm(int n) : n_(n) { check_n(n); }

std::string_view SaDtxFsm::name(State s) {
  switch (s) {
    case State::Idle: return "idle";
    case State::Discovery: return "discovery";
    case State::Associated: return "associated";
    case State::Transferring: return "transferring";
    case State::DtxSleep: return "dtx-sleep";
  }
  return "unknown";
}

void SaDtxFsm::set_active_subframes(int n) {
  check_n(n);
  if (state_ == State::Transferring && active_left_ != n_) {
    throw std::logic_error("DTX length changed in the middle of an active phase");
  }
  n_ = n;
  if (state_ == State::Transferring) active_left_ = n_;
}

StepResult SaDtxFsm::step(SigEvent event) {
  StepResult r;
  r.before = state_name();
  switch (state_) {
    case State::Idle:
      if (event != SigEvent::AssocRequest) violation(r.before, event);
      state_ = State::Discovery;
      break;
    case State::Discovery:
      if (event == SigEvent::UlGrant) {
        state_ = State::Associated;
      } else if (event != SigEvent::Beacon) {
        violation(r.before, event);
      }
      break;
    case State::Associated:
      if (event == SigEvent::Identity) {
        r.emitted = {SigMessage::UeIdentity, SigMessage::DtxLength};
        identity_sent_ = true;
      } else if (event == SigEvent::Rrc && identity_sent_) {
        state_ = State::Transferring;
        active_left_ = n_;
      } else if (event != SigEvent::Beacon) {
        violation(r.before, event);
      }
      break;
    case State::Transferring:
      if (event == SigEvent::SubframeTick) {
        if (--active_left_ == 0) {
          sleep_left_ = kFrame - n_;
          if (sleep_left_ == 0) {
            active_left_ = n_;
          } else {
            state_ = State::DtxSleep;
          }
        }
      } else if (event != SigEvent::Beacon) {
        violation(r.before, event);
      }
      break;
    case State::DtxSleep:
      if (event == SigEvent::SubframeTick) {
        if (--sleep_left_ == 0) {
          state_ = State::Transferring;
          active_left_ = n_;
        }
      } else if (event != SigEvent::Beacon) {
        violation(r.before, event);
      }
      break;
  }
  r.after = state_name();
  return r;
}

// ---------------------------------------------------------------------------
// Standalone DRX

SaDrxFsm::SaDrxFsm(int n) : n_(n) { check_n(n); }

std::string_view SaDrxFsm::name(State s) {
  switch (s) {
    case State::Sleeping: return "sleeping";
    case State::PdcchCheck: return "pdcch-check";
    case State::RequestPending: return "request-pending";
    case State::Configured: return "configured";
    case State::Receiving: return "receiving";
    case State::DrxSleep: return "drx-sleep";
  }
  return "unknown";
}

void SaDrxFsm::set_active_subframes(int n) {
  check_n(n);
  if (state_ == State::Receiving && active_left_ != n_) {
    throw std::logic_error("DRX length changed in the middle of an active phase");
  }
  n_ = n;
  if (state_ == State::Receiving) active_left_ = n_;
}

StepResult SaDrxFsm::step(SigEvent event) {
  StepResult r;
  r.before = state_name();
  switch (state_) {
    case State::Sleeping:
    case State::PdcchCheck:
      if (event == SigEvent::SubframeTick && state_ == State::Sleeping) {
        state_ = State::PdcchCheck;
      } else if (event == SigEvent::PdcchAbsent) {
        state_ = State::Sleeping;
      } else if (event == SigEvent::PdcchPresent) {
        r.emitted.push_back(SigMessage::DataRequest);
        state_ = State::RequestPending;
      } else {
        violation(r.before, event);
      }
      break;
    case State::RequestPending:
      // Beacon and broadcast channel locate the LTE-U control channels.
      if (event == SigEvent::Identity) {
        r.emitted = {SigMessage::UeIdentity, SigMessage::BufferStatus, SigMessage::DrxLength};
        state_ = State::Configured;
      } else if (event != SigEvent::Beacon) {
        violation(r.before, event);
      }
      break;
    case State::Configured:
      if (event == SigEvent::Rrc) {
        state_ = State::Receiving;
        active_left_ = n_;
      } else if (event != SigEvent::Beacon) {
        violation(r.before, event);
      }
      break;
    case State::Receiving:
      if (event == SigEvent::SubframeTick) {
        if (--active_left_ == 0) {
          sleep_left_ = kFrame - n_;
          if (sleep_left_ == 0) {
            active_left_ = n_;
          } else {
            state_ = State::DrxSleep;
          }
        }
      } else if (event != SigEvent::Beacon) {
        violation(r.before, event);
      }
      break;
    case State::DrxSleep:
      if (event == SigEvent::SubframeTick) {
        if (--sleep_left_ == 0) {
          state_ = State::Receiving;
          active_left_ = n_;
        }
      } else if (event != SigEvent::Beacon) {
        violation(r.before, event);
      }
      break;
  }
  r.after = state_name();
  return r;
}

// ---------------------------------------------------------------------------
// Conformance

void write_signalling_trace(std::ostream& os, const std::vector<SignallingRecord>& trace) {
  for (const auto& r : trace) {
    os << r.time << ',' << r.ue << '/' << to_string(r.machine) << ',' << r.before << ','
       << r.event << ',' << r.after << '\n';
  }
}

ConformanceResult conformance_check(const std::vector<SignallingRecord>& trace) {
  struct Track {
    std::string state;
    int active = 0;
    int sleep = 0;
  };
  auto data_state = [](Machine m) -> std::string_view {
    switch (m) {
      case Machine::Uca: return "aggregating";
      case Machine::Dtx: return "transferring";
      case Machine::Drx: return "receiving";
    }
    return "";
  };
  auto sleep_state = [](Machine m) -> std::string_view {
    return m == Machine::Dtx ? "dtx-sleep" : m == Machine::Drx ? "drx-sleep" : "";
  };

  std::map<std::pair<std::uint32_t, Machine>, Track> tracks;
  auto fail = [](std::size_t i, std::string why) {
    return ConformanceResult{false, i, std::move(why)};
  };

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    auto [it, fresh] = tracks.try_emplace({r.ue, r.machine});
    Track& t = it->second;
    if (!fresh && t.state != r.before) {
      return fail(i, "state-before '" + r.before + "' does not continue from '" + t.state + "'");
    }

    if (r.event == kGrantEvent) {
      if (r.before != data_state(r.machine)) {
        return fail(i, "TXOP granted to UE " + std::to_string(r.ue) + " in state '" + r.before + "'");
      }
      if (r.machine != Machine::Uca && (t.active != 0 || t.sleep != 0)) {
        return fail(i, "TXOP granted in the middle of a DTX/DRX cycle");
      }
    } else if (r.event == to_string(SigEvent::SubframeTick) && r.machine != Machine::Uca) {
      const auto active = data_state(r.machine);
      const auto asleep = sleep_state(r.machine);
      if (r.before == active) {
        if (++t.active == kFrame && r.after == active) t.active = 0;  // n = 10, no sleep
      } else if (r.before == asleep) {
        ++t.sleep;
        if (r.after == active) {
          if (t.active + t.sleep != kFrame) {
            return fail(i, "DTX/DRX cycle of " + std::to_string(t.active) + " active + " +
                               std::to_string(t.sleep) + " sleep subframes");
          }
          t.active = 0;
          t.sleep = 0;
        }
      }
    }
    t.state = r.after;
  }
  return {};
}

}  // namespace hapsim::fsm
