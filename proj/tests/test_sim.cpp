#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hapsim/error.hpp"
#include "hapsim/sim/rng.hpp"
#include "hapsim/sim/simulator.hpp"

using namespace hapsim;
using namespace hapsim::sim;

TEST_CASE("an event scheduled at the current clock fires before later events") {
  Simulator s;
  std::vector<int> order;
  s.schedule(5, EventKind::Timer, 0, [&] { order.push_back(2); });
  s.schedule(0, EventKind::Timer, 0, [&] { order.push_back(1); });
  s.run_until(10);
  CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("scheduling in the past is rejected") {
  Simulator s;
  s.run_until(100);
  CHECK_THROWS_AS(s.schedule(99, EventKind::Timer, 0, [] {}), SchedulingError);
  CHECK_NOTHROW(s.schedule(100, EventKind::Timer, 0, [] {}));
}

TEST_CASE("simultaneous events fire in kind priority, then insertion order") {
  Simulator s;
  std::vector<std::string> order;
  s.schedule(7, EventKind::Timer, 0, [&] { order.push_back("timer-a"); });
  s.schedule(7, EventKind::SlotBoundary, 0, [&] { order.push_back("slot"); });
  s.schedule(7, EventKind::TxEnd, 0, [&] { order.push_back("txend"); });
  s.schedule(7, EventKind::Timer, 0, [&] { order.push_back("timer-b"); });
  s.schedule(7, EventKind::Beacon, 0, [&] { order.push_back("beacon"); });
  s.run_until(7);
  CHECK(order == std::vector<std::string>{"txend", "beacon", "slot", "timer-a", "timer-b"});
}

TEST_CASE("run_until on an empty queue only advances the clock") {
  Simulator s;
  const auto& summary = s.run_until(1'000'000);
  CHECK(summary.events_processed == 0);
  CHECK(summary.clock == 1'000'000);
  CHECK(s.now() == 1'000'000);
}

TEST_CASE("events at exactly t_end are processed, later ones stay queued") {
  Simulator s;
  int fired = 0;
  s.schedule(10, EventKind::Timer, 0, [&] { ++fired; });
  auto late = s.schedule(11, EventKind::Timer, 0, [&] { ++fired; });
  s.run_until(10);
  CHECK(fired == 1);
  CHECK(s.pending(late));
  s.run_until(11);
  CHECK(fired == 2);
}

TEST_CASE("cancelled events never fire") {
  Simulator s;
  int fired = 0;
  auto h = s.schedule(3, EventKind::Timer, 0, [&] { ++fired; });
  CHECK(s.cancel(h));
  CHECK_FALSE(s.cancel(h));
  CHECK_FALSE(s.pending(h));
  s.run_until(10);
  CHECK(fired == 0);
  CHECK(s.summary().events_processed == 0);
}

TEST_CASE("clock is non-decreasing across a self-scheduling cascade") {
  Simulator s;
  Micros last = -1;
  bool monotone = true;
  RngStream rng(3, "cascade");
  std::function<void()> hop = [&] {
    monotone = monotone && s.now() >= last;
    last = s.now();
    s.schedule(s.now() + static_cast<Micros>(rng.uniform_int(5)), EventKind::Timer, 0, hop);
  };
  s.schedule(0, EventKind::Timer, 0, hop);
  s.run_until(10'000);
  CHECK(monotone);
  CHECK(s.summary().events_processed > 2000);
}

TEST_CASE("trace hash and records are identical across replays") {
  auto replay = [] {
    Simulator s(42);
    s.record_trace(true);
    auto rng = s.fork_rng("jitter");
    std::function<void()> tick = [&] {
      s.schedule(s.now() + 1 + static_cast<Micros>(rng.uniform_int(100)), EventKind::SlotBoundary, 1, tick);
    };
    s.schedule(0, EventKind::SlotBoundary, 1, tick);
    s.run_until(100'000);
    std::ostringstream os;
    write_trace(os, s.summary());
    return std::pair{s.summary().hash, os.str()};
  };
  const auto a = replay();
  const auto b = replay();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK_FALSE(a.second.empty());
}

TEST_CASE("forking the same stream id twice is an error") {
  RngRegistry reg(1);
  reg.fork("sta-3");
  CHECK_THROWS_AS(reg.fork("sta-3"), Error);
  CHECK_NOTHROW(reg.fork("sta-4"));
}

TEST_CASE("a stream is a pure function of seed, id and counter") {
  RngStream a(9, "lbt-2");
  RngStream b(9, "lbt-2");
  RngStream other(10, "lbt-2");
  std::vector<std::uint64_t> da, db;
  for (int i = 0; i < 100; ++i) {
    da.push_back(a.next_u64());
    db.push_back(b.next_u64());
  }
  CHECK(da == db);
  CHECK(a.draw_at(17) == da[17]);
  CHECK(other.draw_at(0) != da[0]);
}

TEST_CASE("draws from distinct streams pass a chi-square independence test") {
  // 10x10 contingency table of paired first-digit bins; 81 dof, alpha = 0.01.
  constexpr double kCritical = 113.512;
  constexpr int kDraws = 10'000;
  for (const auto& [x, y] : {std::pair{"sta-0", "sta-1"}, std::pair{"lte-0-fading", "lbt-0"},
                             std::pair{"wifi-sta-7", "wifi-sta-8"}}) {
    RngStream a(2024, x);
    RngStream b(2024, y);
    double table[10][10] = {};
    double rows[10] = {}, cols[10] = {};
    for (int i = 0; i < kDraws; ++i) {
      const auto u = static_cast<int>(a.uniform() * 10);
      const auto v = static_cast<int>(b.uniform() * 10);
      table[u][v] += 1;
      rows[u] += 1;
      cols[v] += 1;
    }
    double chi2 = 0;
    for (int u = 0; u < 10; ++u) {
      for (int v = 0; v < 10; ++v) {
        const double expected = rows[u] * cols[v] / kDraws;
        chi2 += (table[u][v] - expected) * (table[u][v] - expected) / expected;
      }
    }
    CAPTURE(x);
    CHECK(chi2 < kCritical);
  }
}

TEST_CASE("uniform draws are uniform over [0, 1)") {
  // Goodness of fit on 100 bins: 99 dof, alpha = 0.01.
  RngStream r(5, "uniformity");
  std::vector<double> bins(100, 0.0);
  constexpr int kDraws = 100'000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    bins[static_cast<std::size_t>(u * 100)] += 1;
  }
  double chi2 = 0;
  for (double c : bins) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
  CHECK(chi2 < 134.642);
}

TEST_CASE("uniform_int stays in range and exponential has the requested mean") {
  RngStream r(6, "shapes");
  for (int i = 0; i < 10'000; ++i) CHECK(r.uniform_int(7) < 7);
  double sum = 0;
  constexpr int kDraws = 200'000;
  for (int i = 0; i < kDraws; ++i) sum += r.exponential(3.0);
  // Standard error of the mean is 3 / sqrt(2e5) ~ 0.0067.
  CHECK(std::abs(sum / kDraws - 3.0) < 0.03);
}
