#include "hapsim/scenario/coexistence.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

#include "hapsim/coex/lbt.hpp"
#include "hapsim/radio/radio_env.hpp"
#include "hapsim/wifi/dcf.hpp"

namespace hapsim::scenario {
namespace {

using analytics::Airtime;
using fsm::Machine;
using fsm::SigEvent;
using sim::EventKind;

struct LteUser {
  double distance = 0.0;
  double mean_snr = 0.0;
  sim::RngStream fading;
  std::optional<fsm::UcaFsm> uca;
  std::optional<fsm::SaDtxFsm> dtx;
  std::optional<fsm::SaDrxFsm> drx;
};

class Engine {
 public:
  Engine(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& opt);
  RunResult run();

 private:
  bool hap() const { return cfg_.scheme == Scheme::HapUca || cfg_.scheme == Scheme::HapSa; }
  std::uint32_t lte_target(std::size_t j) const { return static_cast<std::uint32_t>(n_ + j); }
  std::uint32_t hap_target() const { return static_cast<std::uint32_t>(n_ + m_); }

  void schedule_slot(Micros t);
  void begin_segment(Airtime category);
  void end_segment();
  void log_tx(Micros start, Micros end, RadioSystem system, std::uint32_t node, bool success);
  double gain(std::size_t j) { return radio::fading_gain(lte_[j].fading); }

  void on_slot();
  void on_tx_end();
  void on_lbt_wake(std::size_t j);

  void on_tbtt(Micros tbtt);
  void start_beacon(Micros tbtt);
  void on_beacon_end();
  void on_txop_start(std::size_t k);
  void on_txop_end(std::size_t k);
  void on_cfp_end();
  void open_cp();

  void associate(std::size_t j);
  void schedule_chain(std::size_t j, Machine machine, std::vector<SigEvent> events, std::size_t at);
  void feed(std::size_t j, Machine machine, SigEvent event);
  void log_grant(std::size_t j, Machine machine);

  ScenarioConfig cfg_;
  RunOptions opt_;
  std::uint64_t seed_;
  sim::Simulator sim_;
  int n_;
  int m_;
  Micros end_;
  Micros slot_;
  wifi::ExchangeAirtime air_;
  coex::LteMode lte_mode_ = coex::LteMode::Standalone;

  std::vector<wifi::WifiStation> stations_;
  std::vector<coex::LbtNode> lbt_;
  std::vector<LteUser> lte_;
  std::optional<coex::HapScheduler> scheduler_;
  analytics::MetricsAccumulator metrics_;
  RunResult result_;

  // Medium
  bool busy_ = false;
  Airtime segment_ = Airtime::Idle;
  Micros segment_start_ = 0;
  Micros idle_since_ = 0;
  bool contention_open_ = true;
  std::optional<sim::EventHandle> slot_event_;

  // Exchange on air
  std::vector<std::size_t> tx_wifi_;
  std::vector<std::size_t> tx_lbt_;
  bool tx_success_ = false;

  // HAP superframe
  bool beacon_pending_ = false;
  Micros pending_tbtt_ = 0;
  bool first_beacon_ = true;
  coex::SuperframePlan plan_;
  Micros cp_start_ = 0;
  bool cp_logged_open_ = false;
};

Engine::Engine(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& opt)
    : cfg_(cfg),
      opt_(opt),
      seed_(seed),
      sim_(seed),
      n_(cfg.n_wifi),
      m_(cfg.effective_m()),
      end_(cfg.duration_us()),
      slot_(cfg.mac.slot()),
      air_(wifi::exchange_airtime(cfg.access_mode, cfg.mac)),
      metrics_(cfg.n_wifi, cfg.effective_m(), cfg.duration_us()) {
  cfg_.validate();
  sim_.record_trace(opt_.keep_event_trace);

  for (int i = 0; i < n_; ++i) {
    stations_.push_back(wifi::make_station(static_cast<std::uint32_t>(i), cfg_.access_mode, cfg_.mac,
                                           sim_.fork_rng("wifi-sta-" + std::to_string(i))));
  }

  auto placement = sim_.fork_rng("lte-placement");
  const auto positions = radio::place_users(m_, cfg_.radius_m, placement);
  for (int j = 0; j < m_; ++j) {
    LteUser u;
    u.distance = positions[static_cast<std::size_t>(j)].distance();
    u.mean_snr = radio::mean_snr(u.distance, cfg_.channel);
    u.fading = sim_.fork_rng("lte-" + std::to_string(j) + "-fading");
    lte_.push_back(std::move(u));
  }

  if (cfg_.scheme == Scheme::Lbt) {
    const Micros duty_off = coex::resolve_duty_off(cfg_.lbt, m_, n_);
    for (int j = 0; j < m_; ++j) {
      lbt_.push_back(coex::make_lbt_node(lte_target(static_cast<std::size_t>(j)), cfg_.lbt, duty_off,
                                         slot_, sim_.fork_rng("lbt-" + std::to_string(j))));
    }
  }

  if (hap()) {
    lte_mode_ = cfg_.scheme == Scheme::HapUca ? coex::LteMode::Uca : coex::LteMode::Standalone;
    scheduler_.emplace(m_, n_, lte_mode_, cfg_.superframe);
    for (auto& u : lte_) {
      if (lte_mode_ == coex::LteMode::Uca) {
        u.uca.emplace();
      } else {
        u.dtx.emplace(8);
        u.drx.emplace(8);
      }
    }
  }
}

RunResult Engine::run() {
  if (hap()) {
    contention_open_ = false;
    sim_.schedule(0, EventKind::Beacon, hap_target(), [this] { on_tbtt(0); });
  } else {
    if (opt_.keep_transmissions) result_.cp_intervals.push_back({0, end_});
    schedule_slot(0);
  }

  result_.trace = sim_.run_until(end_);

  // Close the ledger at the horizon.
  if (busy_) {
    metrics_.ledger()[segment_] += end_ - segment_start_;
  } else {
    metrics_.ledger().idle += end_ - idle_since_;
  }
  if (hap() && opt_.keep_transmissions) {
    if (contention_open_ && cp_logged_open_) result_.cp_intervals.push_back({cp_start_, end_});
    if (segment_ == Airtime::Cfp && busy_) result_.cfp_intervals.back().end = end_;
  }

  result_.metrics = metrics_.finalize();
  const auto& mt = result_.metrics;
  auto& row = result_.row;
  row.scheme = std::string(to_string(cfg_.scheme));
  row.n_wifi = n_;
  row.m_lte = m_;
  row.seed = seed_;
  row.per_user_wifi_bps = mt.per_user_wifi_bps;
  row.wifi_aggregate_bps = mt.wifi_aggregate_bps;
  row.lte_aggregate_bps = mt.lte_aggregate_bps;
  row.total_bps = mt.total_bps;
  row.collision_rate = mt.collision_rate;
  row.airtime_idle = mt.airtime_idle;
  row.airtime_success = mt.airtime_success;
  row.airtime_collision = mt.airtime_collision;
  row.airtime_cfp = mt.airtime_cfp;
  row.airtime_beacon = mt.airtime_beacon;
  return std::move(result_);
}

void Engine::schedule_slot(Micros t) {
  slot_event_ = sim_.schedule(t, EventKind::SlotBoundary, hap_target(), [this] { on_slot(); });
}

void Engine::begin_segment(Airtime category) {
  if (busy_) throw std::logic_error("channel segment started while the medium is busy");
  metrics_.ledger().idle += sim_.now() - idle_since_;
  busy_ = true;
  segment_ = category;
  segment_start_ = sim_.now();
}

void Engine::end_segment() {
  metrics_.ledger()[segment_] += sim_.now() - segment_start_;
  busy_ = false;
  idle_since_ = sim_.now();
}

void Engine::log_tx(Micros start, Micros end, RadioSystem system, std::uint32_t node, bool success) {
  if (opt_.keep_transmissions) result_.transmissions.push_back({start, end, system, node, success});
}

// ---------------------------------------------------------------------------
// Contention on the shared slot clock

void Engine::on_slot() {
  slot_event_.reset();
  if (busy_ || !contention_open_) return;

  tx_wifi_ = wifi::ready_stations(stations_);
  tx_lbt_.clear();
  for (std::size_t j = 0; j < lbt_.size(); ++j) {
    if (coex::lbt_ready(lbt_[j])) tx_lbt_.push_back(j);
  }

  if (tx_wifi_.empty() && tx_lbt_.empty()) {
    wifi::idle_slot(stations_);
    for (auto& node : lbt_) coex::lbt_idle_slot(node, cfg_.lbt);
    schedule_slot(sim_.now() + slot_);
    return;
  }

  Micros duration = 0;
  if (!tx_lbt_.empty()) {
    // LTE cannot abort; Wi-Fi colliders finish inside the burst.
    duration = std::max(cfg_.lbt.burst, tx_wifi_.empty() ? Micros{0} : air_.collision);
  } else {
    duration = tx_wifi_.size() == 1 ? air_.success : air_.collision;
  }
  tx_success_ = tx_wifi_.size() + tx_lbt_.size() == 1;
  begin_segment(tx_success_ ? Airtime::Success : Airtime::Collision);

  const Micros now = sim_.now();
  for (auto i : tx_wifi_) log_tx(now, now + duration, RadioSystem::Wifi, stations_[i].id, tx_success_);
  for (auto j : tx_lbt_) {
    coex::lbt_start_burst(lbt_[j]);
    log_tx(now, now + duration, RadioSystem::Lte, lbt_[j].id, tx_success_);
  }
  sim_.schedule(now + duration, EventKind::TxEnd, hap_target(), [this] { on_tx_end(); });
}

void Engine::on_tx_end() {
  end_segment();
  if (tx_success_) {
    metrics_.count_success();
  } else {
    metrics_.count_collision();
  }

  wifi::busy_slot(stations_, tx_wifi_);
  for (std::size_t j = 0; j < lbt_.size(); ++j) {
    if (std::find(tx_lbt_.begin(), tx_lbt_.end(), j) == tx_lbt_.end()) coex::lbt_busy_slot(lbt_[j]);
  }
  for (auto i : tx_wifi_) {
    if (tx_success_) metrics_.add_wifi_bits(i, static_cast<std::uint64_t>(cfg_.mac.payload_bits()));
    wifi::complete_exchange(stations_[i], tx_success_, cfg_.mac);
  }
  for (auto j : tx_lbt_) {
    auto& node = lbt_[j];
    const double bits = coex::burst_transmit(cfg_.lbt, !tx_success_, lte_[j].mean_snr, cfg_.superframe,
                                             cfg_.channel, [this, j] { return gain(j); });
    metrics_.add_lte_bits(j, bits);
    coex::lbt_finish_burst(node);
    if (node.duty_off == 0) {
      coex::lbt_wake(node, cfg_.lbt, slot_);
    } else {
      sim_.schedule(sim_.now() + node.duty_off, EventKind::Timer, node.id, [this, j] { on_lbt_wake(j); });
    }
  }
  for (auto& node : lbt_) coex::lbt_medium_released(node, cfg_.lbt);
  tx_wifi_.clear();
  tx_lbt_.clear();

  if (beacon_pending_) {
    start_beacon(pending_tbtt_);
  } else {
    schedule_slot(sim_.now());
  }
}

void Engine::on_lbt_wake(std::size_t j) {
  auto& node = lbt_[j];
  coex::lbt_wake(node, cfg_.lbt, slot_);
  // Waking into a busy medium: CCA completes with the interframe space that ends it.
}

// ---------------------------------------------------------------------------
// HAP superframe

void Engine::on_tbtt(Micros tbtt) {
  const Micros next = tbtt + cfg_.superframe.repetition_interval;
  if (next <= end_) sim_.schedule(next, EventKind::Beacon, hap_target(), [this, next] { on_tbtt(next); });
  if (busy_) {
    // A CP exchange is still on air; the beacon follows it and the CFP is foreshortened.
    beacon_pending_ = true;
    pending_tbtt_ = tbtt;
    return;
  }
  start_beacon(tbtt);
}

void Engine::start_beacon(Micros tbtt) {
  beacon_pending_ = false;
  if (slot_event_) {
    sim_.cancel(*slot_event_);
    slot_event_.reset();
  }
  const Micros now = sim_.now();
  if (contention_open_ && opt_.keep_transmissions && cp_logged_open_) {
    result_.cp_intervals.push_back({cp_start_, now});
  }
  contention_open_ = false;
  cp_logged_open_ = false;

  plan_ = scheduler_->plan(tbtt, now);
  result_.superframes.push_back(
      {plan_.frame, plan_.beacon_start, plan_.cfp_start, plan_.cfp_end, plan_.cfp_budget, plan_.grants});

  begin_segment(Airtime::Beacon);
  sim_.schedule(now + cfg_.superframe.beacon_duration, EventKind::Timer, hap_target(),
                [this] { on_beacon_end(); });

  if (first_beacon_) {
    first_beacon_ = false;
    for (std::size_t j = 0; j < lte_.size(); ++j) associate(j);
  } else {
    for (std::size_t j = 0; j < lte_.size(); ++j) {
      if (lte_[j].uca) feed(j, Machine::Uca, SigEvent::Beacon);
      if (lte_[j].dtx) feed(j, Machine::Dtx, SigEvent::Beacon);
      if (lte_[j].drx) feed(j, Machine::Drx, SigEvent::Beacon);
    }
  }
}

void Engine::on_beacon_end() {
  end_segment();
  if (plan_.grants.empty()) {
    open_cp();
    return;
  }
  begin_segment(Airtime::Cfp);
  if (opt_.keep_transmissions) result_.cfp_intervals.push_back({plan_.cfp_start, plan_.cfp_end});
  for (std::size_t k = 0; k < plan_.grants.size(); ++k) {
    const auto& g = plan_.grants[k];
    sim_.schedule(g.start, EventKind::TxopStart, lte_target(g.user), [this, k] { on_txop_start(k); });
  }
  sim_.schedule(plan_.cfp_end, EventKind::CfpEnd, hap_target(), [this] { on_cfp_end(); });
}

void Engine::on_txop_start(std::size_t k) {
  const auto g = plan_.grants[k];
  auto& u = lte_[g.user];
  log_tx(g.start, g.end(), RadioSystem::Lte, lte_target(g.user), true);

  if (lte_mode_ == coex::LteMode::Uca) {
    log_grant(g.user, Machine::Uca);
  } else {
    u.dtx->set_active_subframes(g.active_subframes);
    u.drx->set_active_subframes(g.active_subframes);
    log_grant(g.user, Machine::Dtx);
    log_grant(g.user, Machine::Drx);
    // n active subframes after the sync header, then 10 - n asleep.
    const Micros first = g.start + cfg_.superframe.header;
    for (int s = 1; s <= coex::kSubframesPerFrame; ++s) {
      const std::size_t j = g.user;
      sim_.schedule(first + s * cfg_.superframe.subframe, EventKind::Timer, lte_target(j), [this, j] {
        feed(j, Machine::Dtx, SigEvent::SubframeTick);
        feed(j, Machine::Drx, SigEvent::SubframeTick);
      });
    }
  }
  sim_.schedule(g.end(), EventKind::TxopEnd, lte_target(g.user), [this, k] { on_txop_end(k); });
}

void Engine::on_txop_end(std::size_t k) {
  const auto& g = plan_.grants[k];
  const std::size_t j = g.user;
  const double bits = coex::cfp_transmit(g, lte_mode_, lte_[j].mean_snr, cfg_.superframe, cfg_.channel,
                                         [this, j] { return gain(j); });
  metrics_.add_lte_bits(j, bits);
}

void Engine::on_cfp_end() {
  end_segment();
  open_cp();
}

void Engine::open_cp() {
  contention_open_ = true;
  cp_start_ = sim_.now();
  cp_logged_open_ = true;
  schedule_slot(sim_.now());
}

// ---------------------------------------------------------------------------
// Signalling

void Engine::associate(std::size_t j) {
  auto& u = lte_[j];
  if (u.uca) {
    schedule_chain(j, Machine::Uca,
                   {SigEvent::AssocRequest, SigEvent::UlGrant, SigEvent::Identity, SigEvent::Rrc, SigEvent::Beacon},
                   0);
  }
  if (u.dtx) {
    schedule_chain(j, Machine::Dtx,
                   {SigEvent::AssocRequest, SigEvent::Beacon, SigEvent::UlGrant, SigEvent::Identity, SigEvent::Rrc},
                   0);
  }
  if (u.drx) {
    schedule_chain(j, Machine::Drx,
                   {SigEvent::SubframeTick, SigEvent::PdcchPresent, SigEvent::Beacon, SigEvent::Identity,
                    SigEvent::Rrc},
                   0);
  }
}

void Engine::schedule_chain(std::size_t j, Machine machine, std::vector<SigEvent> events, std::size_t at) {
  sim_.schedule(sim_.now(), EventKind::Timer, lte_target(j), [this, j, machine, events, at] {
    feed(j, machine, events[at]);
    if (at + 1 < events.size()) schedule_chain(j, machine, events, at + 1);
  });
}

void Engine::feed(std::size_t j, Machine machine, SigEvent event) {
  auto& u = lte_[j];
  fsm::StepResult r;
  switch (machine) {
    case Machine::Uca: r = u.uca->step(event); break;
    case Machine::Dtx: r = u.dtx->step(event); break;
    case Machine::Drx: r = u.drx->step(event); break;
  }
  if (opt_.keep_signalling) {
    result_.signalling.push_back({sim_.now(), static_cast<std::uint32_t>(j), machine, std::string(r.before),
                                  std::string(fsm::to_string(event)), std::string(r.after)});
  }
}

void Engine::log_grant(std::size_t j, Machine machine) {
  if (!opt_.keep_signalling) return;
  const auto& u = lte_[j];
  std::string state;
  switch (machine) {
    case Machine::Uca: state = u.uca->state_name(); break;
    case Machine::Dtx: state = u.dtx->state_name(); break;
    case Machine::Drx: state = u.drx->state_name(); break;
  }
  result_.signalling.push_back(
      {sim_.now(), static_cast<std::uint32_t>(j), machine, state, std::string(fsm::kGrantEvent), state});
}

bool overlaps(Micros a0, Micros a1, Micros b0, Micros b1) { return a0 < b1 && b0 < a1; }

std::size_t count_overlapping(const std::vector<Transmission>& txs, RadioSystem system,
                              const std::vector<Interval>& intervals) {
  std::size_t count = 0;
  for (const auto& t : txs) {
    if (t.system != system) continue;
    // Intervals are sorted and disjoint; check the ones that could touch t.
    auto it = std::upper_bound(intervals.begin(), intervals.end(), t.start,
                               [](Micros v, const Interval& iv) { return v < iv.end; });
    if (it != intervals.end() && overlaps(t.start, t.end, it->start, it->end)) ++count;
  }
  return count;
}

}  // namespace

RunResult simulate(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& options) {
  Engine engine(config, seed, options);
  return engine.run();
}

IsolationReport check_isolation(const RunResult& result) {
  IsolationReport r;
  for (const auto& t : result.transmissions) {
    (t.system == RadioSystem::Wifi ? r.wifi_transmissions : r.lte_transmissions)++;
  }
  r.wifi_overlapping_cfp = count_overlapping(result.transmissions, RadioSystem::Wifi, result.cfp_intervals);
  r.lte_overlapping_cp = count_overlapping(result.transmissions, RadioSystem::Lte, result.cp_intervals);
  return r;
}

std::size_t count_success_overlaps(const std::vector<Transmission>& transmissions) {
  std::vector<Transmission> txs = transmissions;
  std::sort(txs.begin(), txs.end(), [](const Transmission& a, const Transmission& b) { return a.start < b.start; });
  std::size_t violations = 0;
  Micros max_end_before = INT64_MIN;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    const auto& t = txs[i];
    if (t.success) {
      const bool prev = max_end_before > t.start;
      const bool next = i + 1 < txs.size() && txs[i + 1].start < t.end;
      if (prev || next) ++violations;
    }
    max_end_before = std::max(max_end_before, t.end);
  }
  return violations;
}

}  // namespace hapsim::scenario
