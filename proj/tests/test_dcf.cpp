#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hapsim/error.hpp"
#include "hapsim/scenario/coexistence.hpp"
#include "hapsim/wifi/dcf.hpp"

using namespace hapsim;
using namespace hapsim::wifi;
using doctest::Approx;

TEST_CASE("contention window doubles per stage and clamps at cw_max") {
  const MacTiming t;
  CHECK(contention_window(0, t) == 16);
  CHECK(contention_window(1, t) == 32);
  CHECK(contention_window(6, t) == 1024);
  CHECK(contention_window(9, t) == 1024);
}

TEST_CASE("backoff draws are uniform over the stage window") {
  const MacTiming t;
  sim::RngStream rng(11, "backoff");
  double sum = 0;
  int lo = 16, hi = -1;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) {
    const int b = draw_backoff(0, t, rng);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
    sum += b;
  }
  CHECK(lo == 0);
  CHECK(hi == 15);
  CHECK(sum / kDraws == Approx(7.5).epsilon(0.01));

  int top = 0;
  for (int i = 0; i < 100'000; ++i) {
    const int b = draw_backoff(6, t, rng);
    REQUIRE(b >= 0);
    REQUIRE(b <= 1023);
    top = std::max(top, b);
  }
  CHECK(top > 1000);

  sim::RngStream a(3, "same");
  sim::RngStream b(3, "same");
  for (int i = 0; i < 100; ++i) CHECK(draw_backoff(2, t, a) == draw_backoff(2, t, b));
}

TEST_CASE("exchange durations for basic access") {
  const MacTiming t;
  const auto d = exchange_durations(AccessMode::Basic, t);
  // Data frame: 192 + 224 + 12000 bits; ACK: 112 + 192 bits; all at 130 Mbit/s.
  const double data = 12416.0 / 130.0;
  const double ack = 304.0 / 130.0;
  CHECK(d.success_us == Approx(50 + data + 20 + 16 + ack + 20));
  CHECK(d.collision_us == Approx(50 + data + 20));
  CHECK(d.success_us == Approx(203.85).epsilon(1e-4));
  CHECK(d.collision_us == Approx(165.51).epsilon(1e-4));

  const auto grid = exchange_airtime(AccessMode::Basic, t);
  CHECK(grid.success == 204);
  CHECK(grid.collision == 166);
  CHECK(to_event_grid(9.0) == 9);
}

TEST_CASE("exchange durations: RTS/CTS and the infinite-rate limit") {
  MacTiming t;
  const auto basic = exchange_durations(AccessMode::Basic, t);
  const auto rts = exchange_durations(AccessMode::RtsCts, t);
  CHECK(rts.collision_us < basic.collision_us);
  CHECK(rts.success_us > basic.success_us);
  CHECK(rts.collision_us == Approx(50 + 352.0 / 130.0 + 20));

  t.channel_bit_rate_bps = 1e18;
  const auto fast = exchange_durations(AccessMode::Basic, t);
  CHECK(fast.success_us == Approx(50 + 2 * 20 + 16));
}

TEST_CASE("mac timing validation enforces the window law") {
  MacTiming t;
  CHECK_NOTHROW(t.validate());
  t.cw_max = 512;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = {};
  t.slot_us = 0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  CHECK(parse_access_mode("rts-cts") == AccessMode::RtsCts);
  CHECK_THROWS_AS(parse_access_mode("pcf"), ConfigError);
}

namespace {

std::vector<WifiStation> stations_with(std::initializer_list<int> counters) {
  std::vector<WifiStation> out;
  std::uint32_t id = 0;
  for (int c : counters) {
    WifiStation s;
    s.id = id;
    s.counter = c;
    s.rng = sim::RngStream(1, "sta-" + std::to_string(id));
    ++id;
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("dcf_step: idle slot, success, collision and busy medium") {
  const MacTiming t;
  const auto air = exchange_airtime(AccessMode::Basic, t);

  auto s = stations_with({2, 3});
  auto r = dcf_step(s, MediumState::Idle, air);
  CHECK(r.outcome == SlotOutcome::Idle);
  CHECK(s[0].counter == 1);
  CHECK(s[1].counter == 2);

  r = dcf_step(s, MediumState::Busy, air);
  CHECK(r.outcome == SlotOutcome::Blocked);
  CHECK(s[0].counter == 1);

  dcf_step(s, MediumState::Idle, air);
  r = dcf_step(s, MediumState::Idle, air);
  CHECK(r.outcome == SlotOutcome::Success);
  CHECK(r.duration == air.success);
  CHECK(r.transmitters == std::vector<std::size_t>{0});

  auto pair = stations_with({0, 0, 4});
  r = dcf_step(pair, MediumState::Idle, air);
  REQUIRE(r.outcome == SlotOutcome::Collision);
  CHECK(r.duration == air.collision);
  for (auto i : r.transmitters) complete_exchange(pair[i], false, t);
  busy_slot(pair, r.transmitters);
  CHECK(pair[0].stage == 1);
  CHECK(pair[1].stage == 1);
  CHECK(pair[2].stage == 0);
  CHECK(pair[2].counter == 3);
  for (auto i : r.transmitters) CHECK(pair[i].counter < contention_window(1, t));
}

TEST_CASE("stage resets on success and clamps after repeated collisions") {
  const MacTiming t;
  auto s = stations_with({0});
  for (int k = 0; k < 12; ++k) {
    complete_exchange(s[0], false, t);
    CHECK(s[0].stage == std::min(k + 1, 6));
    CHECK(s[0].counter >= 0);
    CHECK(s[0].counter < contention_window(s[0].stage, t));
  }
  complete_exchange(s[0], true, t);
  CHECK(s[0].stage == 0);
  CHECK(s[0].counter < 16);
}

TEST_CASE("a lone saturated station never collides and matches the renewal cycle") {
  scenario::ScenarioConfig cfg;
  cfg.scheme = scenario::Scheme::WifiOnly;
  cfg.n_wifi = 1;
  cfg.m_lte = 0;
  cfg.duration_s = 1.0;
  scenario::RunOptions opt;
  opt.keep_transmissions = true;
  const auto r = scenario::simulate(cfg, 1, opt);
  CHECK(r.metrics.collisions == 0);
  CHECK(std::all_of(r.transmissions.begin(), r.transmissions.end(),
                    [](const auto& tx) { return tx.success; }));
  // One cycle: a success plus 7.5 idle slots on average.
  const double cycle_us = 204.0 + 7.5 * 9.0;
  CHECK(r.metrics.wifi_aggregate_bps == Approx(12000.0 / cycle_us * 1e6).epsilon(0.01));
  CHECK(r.metrics.wifi_aggregate_bps == Approx(44.3e6).epsilon(0.01));
}

TEST_CASE("successes and collisions never overlap on the channel") {
  scenario::ScenarioConfig cfg;
  cfg.scheme = scenario::Scheme::WifiOnly;
  cfg.n_wifi = 15;
  cfg.duration_s = 1.0;
  scenario::RunOptions opt;
  opt.keep_transmissions = true;
  const auto r = scenario::simulate(cfg, 4, opt);
  REQUIRE(r.transmissions.size() > 1000);
  sim::Micros busy_until = 0;
  sim::Micros last_start = -1;
  for (const auto& tx : r.transmissions) {
    if (tx.start == last_start) continue;  // colliders share one interval
    CHECK(tx.start >= busy_until);
    busy_until = tx.end;
    last_start = tx.start;
  }
}

TEST_CASE("per-user throughput is non-increasing in N") {
  scenario::ScenarioConfig cfg;
  cfg.scheme = scenario::Scheme::WifiOnly;
  cfg.duration_s = 2.0;
  double prev = 1e18;
  for (int n : {2, 5, 10, 20, 40}) {
    cfg.n_wifi = n;
    double sum = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) sum += scenario::simulate(cfg, seed).metrics.per_user_wifi_bps;
    CAPTURE(n);
    CHECK(sum / 3 < prev);
    prev = sum / 3;
  }
}
