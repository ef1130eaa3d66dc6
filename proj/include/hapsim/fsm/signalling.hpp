#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hapsim/sim/simulator.hpp"

namespace hapsim::fsm {

using sim::Micros;

enum class SigEvent {
  AssocRequest,
  Beacon,
  UlGrant,
  Identity,
  Rrc,
  SubframeTick,
  PdcchPresent,
  PdcchAbsent,
  DataRequest,
};

std::string_view to_string(SigEvent event);

/// Abstract tokens a UE emits; payloads are not modelled.
enum class SigMessage { UeIdentity, DtxLength, DrxLength, BufferStatus, DataRequest, Aggregate };

std::string_view to_string(SigMessage message);

struct StepResult {
  std::string_view before;
  std::string_view after;
  std::vector<SigMessage> emitted;
};

/// UE side of unlicensed carrier aggregation.
class UcaFsm {
 public:
  enum class State { Idle, AssociationRequested, Granted, IdentitySent, RrcConfigured, Aggregating };

  State state() const { return state_; }
  std::string_view state_name() const { return name(state_); }
  static std::string_view name(State s);

  /// Throws ProtocolViolation for events outside the current state's alphabet.
  StepResult step(SigEvent event);

 private:
  State state_ = State::Idle;
};

/// Standalone uplink: n active subframes, then 10 - n of DTX sleep.
class SaDtxFsm {
 public:
  enum class State { Idle, Discovery, Associated, Transferring, DtxSleep };

  explicit SaDtxFsm(int n);

  State state() const { return state_; }
  std::string_view state_name() const { return name(state_); }
  static std::string_view name(State s);
  int active_subframes() const { return n_; }
  int active_left() const { return active_left_; }
  int sleep_left() const { return sleep_left_; }
  /// Next TXOP may carry a different n; takes effect at the next active phase.
  void set_active_subframes(int n);

  StepResult step(SigEvent event);

 private:
  State state_ = State::Idle;
  int n_;
  int active_left_ = 0;
  int sleep_left_ = 0;
  bool identity_sent_ = false;
};

/// Standalone downlink: periodic PDCCH check, n active subframes, 10 - n of DRX sleep.
class SaDrxFsm {
 public:
  enum class State { Sleeping, PdcchCheck, RequestPending, Configured, Receiving, DrxSleep };

  explicit SaDrxFsm(int n);

  State state() const { return state_; }
  std::string_view state_name() const { return name(state_); }
  static std::string_view name(State s);
  int active_subframes() const { return n_; }
  void set_active_subframes(int n);

  StepResult step(SigEvent event);

 private:
  State state_ = State::Sleeping;
  int n_;
  int active_left_ = 0;
  int sleep_left_ = 0;
};

enum class Machine { Uca, Dtx, Drx };

std::string_view to_string(Machine machine);

/// One conformance-trace line. Grants are logged with event "txop-grant"
/// and an unchanged state.
struct SignallingRecord {
  Micros time = 0;
  std::uint32_t ue = 0;
  Machine machine = Machine::Uca;
  std::string before;
  std::string event;
  std::string after;
};

inline constexpr std::string_view kGrantEvent = "txop-grant";

/// Writes "time,ue-id,state-before,event,state-after" lines; ue-id is
/// "<ue>/<machine>".
void write_signalling_trace(std::ostream& os, const std::vector<SignallingRecord>& trace);

struct ConformanceResult {
  bool pass = true;
  std::optional<std::size_t> violation_index;
  std::string reason;
};

/// Checks that no UE is granted a TXOP before reaching a data state and
/// that every completed DTX/DRX cycle spans exactly 10 subframes.
ConformanceResult conformance_check(const std::vector<SignallingRecord>& trace);

}  // namespace hapsim::fsm
