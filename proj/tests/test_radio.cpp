#include <cmath>

#include "doctest.h"
#include "hapsim/error.hpp"
#include "hapsim/radio/radio_env.hpp"
#include "hapsim/sim/rng.hpp"

using namespace hapsim;
using namespace hapsim::radio;
using doctest::Approx;

TEST_CASE("placement: empty request yields no users") {
  sim::RngStream rng(1, "placement");
  CHECK(place_users(0, 100.0, rng).empty());
}

TEST_CASE("placement is uniform over the disk") {
  sim::RngStream rng(1, "placement");
  const auto users = place_users(10'000, 100.0, rng);
  REQUIRE(users.size() == 10'000);
  double sum = 0;
  int inner = 0;
  for (const auto& u : users) {
    CHECK(u.distance() <= 100.0);
    sum += u.distance();
    if (u.distance() <= 50.0) ++inner;
  }
  // E[d] = 2R/3 for a uniform disk; a quarter of the area lies within R/2.
  CHECK(sum / 10'000 == Approx(200.0 / 3.0).epsilon(0.01));
  CHECK(inner / 10'000.0 == Approx(0.25).epsilon(0.05));
}

TEST_CASE("path loss follows the log-distance law with a 1 m clamp") {
  const ChannelParams p;
  CHECK(path_loss_db(1.0, p) == Approx(46.4));
  CHECK(path_loss_db(10.0, p) == Approx(96.4));
  CHECK(path_loss_db(0.5, p) == path_loss_db(1.0, p));
  CHECK(path_loss_db(100.0, p) == Approx(146.4));
}

TEST_CASE("fading gain has unit mean and is reproducible") {
  sim::RngStream a(77, "lte-0-fading");
  double sum = 0;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) sum += fading_gain(a);
  CHECK(sum / kDraws == Approx(1.0).epsilon(0.005));

  sim::RngStream b(77, "x");
  sim::RngStream c(77, "x");
  for (int i = 0; i < 50; ++i) CHECK(fading_gain(b) == fading_gain(c));
}

TEST_CASE("noise floor at 20 MHz") {
  const ChannelParams p;
  CHECK(noise_power_dbm(p) == Approx(-174.0 + 10.0 * std::log10(2e7)));
  CHECK(noise_power_dbm(p) == Approx(-100.99).epsilon(1e-4));
}

TEST_CASE("link budget combines power, loss, fading and noise in linear units") {
  const ChannelParams p;
  // 30 dBm - 96.4 dB + 100.99 dB = 34.59 dB at 10 m without fading.
  const auto lb = link_budget(10.0, 1.0, p);
  CHECK(10.0 * std::log10(lb.snr) == Approx(30.0 - 96.4 + 174.0 - 10.0 * std::log10(2e7)));
  CHECK(link_budget(10.0, 0.5, p).snr == Approx(lb.snr * 0.5));
  CHECK(mean_snr(10.0, p) == Approx(lb.snr));
}

TEST_CASE("averaging snr over fading preserves the mean snr") {
  const ChannelParams p;
  sim::RngStream rng(8, "fade-mean");
  double sum = 0;
  constexpr int kDraws = 400'000;
  for (int i = 0; i < kDraws; ++i) sum += link_budget(40.0, fading_gain(rng), p).snr;
  CHECK(sum / kDraws == Approx(mean_snr(40.0, p)).epsilon(0.01));
}

TEST_CASE("lte rate: Shannon efficiency, capped, minus control overhead") {
  const ChannelParams p;
  CHECK(lte_rate(0.0, p) == 0.0);
  CHECK(lte_rate(1.0, p) == Approx(20e6 * 12.0 / 14.0));
  CHECK(lte_rate(1.0, p) == Approx(17.142857e6));
  CHECK(lte_rate(1e6, p) == Approx(20e6 * 6.0 * 12.0 / 14.0));
  CHECK(lte_rate(1e6, p) == Approx(102.857e6).epsilon(1e-5));
  CHECK(lte_rate(63.0, p) == Approx(lte_rate(1e9, p)));
  CHECK_THROWS_AS(lte_rate(-0.1, p), Error);
}

TEST_CASE("channel parameter validation") {
  ChannelParams p;
  CHECK_NOTHROW(p.validate());
  p.control_overhead = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.bandwidth_hz = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.pathloss_exponent = -1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.spectral_efficiency_cap = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
