#include <sstream>
#include <string>

#include "doctest.h"
#include "hapsim/error.hpp"
#include "hapsim/scenario/config.hpp"
#include "hapsim/scenario/csv.hpp"
#include "hapsim/scenario/experiment.hpp"

using namespace hapsim;
using namespace hapsim::scenario;
using doctest::Approx;

namespace {

std::string error_of(const std::string& json) {
  try {
    parse_config(json).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config: defaults and overrides") {
  const auto c = parse_config(R"({"scheme": "hap-sa", "n_wifi": 30, "m_lte": 10,
                                   "mac": {"payload_bytes": 1000},
                                   "lbt": {"duty_off_us": 0}, "seeds": [3, 4]})");
  CHECK(c.scheme == Scheme::HapSa);
  CHECK(c.n_wifi == 30);
  CHECK(c.mac.payload_bytes == 1000);
  CHECK(c.mac.slot_us == 9);
  CHECK(c.superframe.repetition_interval == 100'000);
  CHECK(c.lbt.duty_off.value() == 0);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK_FALSE(parse_config(R"({"lbt": {"duty_off_us": "fair"}})").lbt.duty_off.has_value());
  CHECK(parse_config("{}").duration_us() == 10'000'000);
}

TEST_CASE("config errors name the field path") {
  CHECK(error_of(R"({"mac": {"slot_us": "nine"}})").find("config.mac.slot_us") != std::string::npos);
  CHECK(error_of(R"({"scheme": "csat"})").find("config.scheme") != std::string::npos);
  CHECK(error_of(R"({"n_wifi": -1})").find("config.n_wifi") != std::string::npos);
  CHECK(error_of(R"({"channel": {"bandwith_hz": 1}})").find("config.channel.bandwith_hz") != std::string::npos);
  CHECK(error_of(R"({"seeds": []})").find("seeds") != std::string::npos);
  CHECK(error_of(R"({"duration_s": 0})").find("duration_s") != std::string::npos);
  CHECK(error_of(R"({"n_wifi": 0, "m_lte": 0})").find("N + M") != std::string::npos);
  CHECK_FALSE(error_of("{not json").empty());
}

TEST_CASE("wifi-only warns about ignored LTE users") {
  ScenarioConfig c;
  c.m_lte = 4;
  const auto warnings = c.validate();
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("ignores") != std::string::npos);
  CHECK(c.effective_m() == 0);
}

TEST_CASE("resolved config round-trips through JSON") {
  auto c = parse_config(R"({"scheme": "lbt", "n_wifi": 7, "m_lte": 2, "radius_m": 50,
                             "access_mode": "rts-cts", "lbt": {"duty_off_us": 1234}})");
  const auto again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
  CHECK(again.access_mode == wifi::AccessMode::RtsCts);
  CHECK(again.lbt.duty_off.value() == 1234);
}

TEST_CASE("seed lists") {
  CHECK(parse_seed_list("1,2,10") == std::vector<std::uint64_t>{1, 2, 10});
  CHECK_THROWS_AS(parse_seed_list("1,x"), ConfigError);
  CHECK_THROWS_AS(parse_seed_list(""), ConfigError);
}

TEST_CASE("run: one row per seed, LTE zero for wifi-only") {
  ScenarioConfig c;
  c.n_wifi = 1;
  c.duration_s = 1.0;
  const auto rows = run(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lte_aggregate_bps == 0.0);
  CHECK(rows[0].scheme == "wifi-only");
}

TEST_CASE("identical inputs give byte-identical CSV, serial or parallel") {
  ScenarioConfig c;
  c.scheme = Scheme::HapSa;
  c.n_wifi = 10;
  c.m_lte = 3;
  c.duration_s = 0.5;
  c.seeds = {5, 1, 3, 2};
  auto csv = [](const std::vector<analytics::ResultRow>& rows) {
    std::ostringstream os;
    write_results_csv(os, rows);
    return os.str();
  };
  const auto a = csv(run(c, 1));
  const auto b = csv(run(c, 3));
  CHECK(a == b);
  CHECK(a == csv(run(c, 1)));
  const auto rows = run(c, 2);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].seed < rows[i].seed);
}

TEST_CASE("results CSV round-trips exactly") {
  ScenarioConfig c;
  c.scheme = Scheme::Lbt;
  c.m_lte = 2;
  c.duration_s = 0.3;
  c.seeds = {1, 2};
  const auto rows = run(c);
  std::ostringstream os;
  write_results_csv(os, rows);
  std::istringstream is(os.str());
  const auto back = read_results_csv(is);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].total_bps == rows[i].total_bps);
    CHECK(back[i].collision_rate == rows[i].collision_rate);
    CHECK(back[i].seed == rows[i].seed);
  }
  std::ostringstream again;
  write_results_csv(again, back);
  CHECK(again.str() == os.str());

  std::istringstream bad("scheme,n_wifi\nlbt,3\n");
  CHECK_THROWS_AS(read_results_csv(bad), ConfigError);
}

TEST_CASE("sweeps: a single value equals run, and M = 0 tracks wifi-only") {
  ScenarioConfig c;
  c.scheme = Scheme::HapSa;
  c.n_wifi = 10;
  c.m_lte = 5;
  c.duration_s = 1.0;
  c.seeds = {1, 2};
  const auto single = sweep(c, SweepAxis::N, {10}, {Scheme::HapSa});
  const auto direct = run(c);
  REQUIRE(single.size() == direct.size());
  for (std::size_t i = 0; i < single.size(); ++i) CHECK(single[i].total_bps == direct[i].total_bps);

  const auto rows = sweep(c, SweepAxis::M, {0, 5}, {Scheme::HapSa, Scheme::WifiOnly});
  double hap0 = 0, wifi = 0;
  for (const auto& r : rows) {
    if (r.scheme == "hap-sa" && r.m_lte == 0) hap0 += r.per_user_wifi_bps;
    if (r.scheme == "wifi-only" && r.m_lte == 0) wifi += r.per_user_wifi_bps;
  }
  REQUIRE(wifi > 0);
  CHECK(std::abs(hap0 / wifi - 1.0) < 0.01);
  CHECK(parse_axis("M") == SweepAxis::M);
  CHECK_THROWS_AS(parse_axis("K"), ConfigError);
}

TEST_CASE("oracle table") {
  const wifi::MacTiming t;
  CHECK(oracle_table({}, t, wifi::AccessMode::Basic).empty());
  const auto rows = oracle_table({1, 10}, t, wifi::AccessMode::Basic);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].throughput_bps == Approx(44.3e6).epsilon(0.005));
  CHECK(rows[1].tau_residual < 1e-10);
  std::ostringstream os;
  write_oracle_csv(os, rows);
  CHECK(os.str().rfind("n,tau,p,throughput_bps,tau_residual\n", 0) == 0);
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(40344000) == "40344000");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_number(x)) == x);
}
