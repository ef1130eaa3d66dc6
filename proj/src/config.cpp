#include "hapsim/scenario/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hapsim/error.hpp"
#include "json.hpp"

namespace hapsim::scenario {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& obj, std::string path, std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
    for (const auto& [key, _] : obj_.items()) {
      if (!allowed.count(key)) throw ConfigError(path_ + "." + key + ": unknown field");
    }
  }

  template <class T>
  void read(const std::string& key, T& out) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    const std::string where = path_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError(where + ": expected a boolean");
      out = it->template get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw ConfigError(where + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (it->is_number_unsigned() == false && it->template get<long long>() < 0) {
          throw ConfigError(where + ": expected a non-negative integer");
        }
      }
      out = it->template get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw ConfigError(where + ": expected a number");
      out = it->template get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw ConfigError(where + ": expected a string");
      out = it->template get<std::string>();
    }
  }

  const json* child(const std::string& key) const {
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  std::string path(const std::string& key) const { return path_ + "." + key; }

 private:
  const json& obj_;
  std::string path_;
};

void read_mac(const json& j, const std::string& path, wifi::MacTiming& m) {
  Reader r(j, path,
           {"slot_us", "sifs_us", "difs_us", "propagation_delay_us", "phy_header_bits",
            "mac_header_bits", "ack_bits", "rts_bits", "cts_bits", "payload_bytes",
            "channel_bit_rate_bps", "cw_min", "cw_max", "max_backoff_stage"});
  r.read("slot_us", m.slot_us);
  r.read("sifs_us", m.sifs_us);
  r.read("difs_us", m.difs_us);
  r.read("propagation_delay_us", m.propagation_delay_us);
  r.read("phy_header_bits", m.phy_header_bits);
  r.read("mac_header_bits", m.mac_header_bits);
  r.read("ack_bits", m.ack_bits);
  r.read("rts_bits", m.rts_bits);
  r.read("cts_bits", m.cts_bits);
  r.read("payload_bytes", m.payload_bytes);
  r.read("channel_bit_rate_bps", m.channel_bit_rate_bps);
  r.read("cw_min", m.cw_min);
  r.read("cw_max", m.cw_max);
  r.read("max_backoff_stage", m.max_backoff_stage);
}

void read_channel(const json& j, const std::string& path, radio::ChannelParams& c) {
  Reader r(j, path,
           {"bandwidth_hz", "tx_power_dbm", "noise_density_dbm_hz", "pathloss_exponent",
            "reference_loss_db", "spectral_efficiency_cap", "control_overhead"});
  r.read("bandwidth_hz", c.bandwidth_hz);
  r.read("tx_power_dbm", c.tx_power_dbm);
  r.read("noise_density_dbm_hz", c.noise_density_dbm_hz);
  r.read("pathloss_exponent", c.pathloss_exponent);
  r.read("reference_loss_db", c.reference_loss_db);
  r.read("spectral_efficiency_cap", c.spectral_efficiency_cap);
  r.read("control_overhead", c.control_overhead);
}

void read_superframe(const json& j, const std::string& path, coex::SuperframeConfig& s) {
  Reader r(j, path, {"repetition_interval_us", "beacon_us", "subframe_us", "header_us", "ack_us"});
  r.read("repetition_interval_us", s.repetition_interval);
  r.read("beacon_us", s.beacon_duration);
  r.read("subframe_us", s.subframe);
  r.read("header_us", s.header);
  r.read("ack_us", s.ack);
}

void read_lbt(const json& j, const std::string& path, coex::LbtParams& l) {
  Reader r(j, path, {"cca_us", "contention_window", "burst_us", "burst_subframes", "duty_off_us"});
  r.read("cca_us", l.cca);
  r.read("contention_window", l.contention_window);
  r.read("burst_us", l.burst);
  r.read("burst_subframes", l.burst_subframes);
  if (const json* d = r.child("duty_off_us")) {
    if (d->is_null()) {
      l.duty_off.reset();
    } else if (d->is_string() && d->get<std::string>() == "fair") {
      l.duty_off.reset();
    } else if (d->is_number_integer()) {
      l.duty_off = d->get<Micros>();
    } else {
      throw ConfigError(r.path("duty_off_us") + ": expected an integer, null or \"fair\"");
    }
  }
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::WifiOnly: return "wifi-only";
    case Scheme::Lbt: return "lbt";
    case Scheme::HapUca: return "hap-uca";
    case Scheme::HapSa: return "hap-sa";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view text) {
  for (auto s : {Scheme::WifiOnly, Scheme::Lbt, Scheme::HapUca, Scheme::HapSa}) {
    if (text == to_string(s)) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(text) +
                    "' (expected wifi-only, lbt, hap-uca or hap-sa)");
}

Micros ScenarioConfig::duration_us() const {
  return static_cast<Micros>(std::llround(duration_s * 1e6));
}

std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> warnings;
  if (n_wifi < 0) throw ConfigError("config.n_wifi must be >= 0");
  if (m_lte < 0) throw ConfigError("config.m_lte must be >= 0");
  if (n_wifi + effective_m() < 1) throw ConfigError("config: need at least one user (N + M >= 1)");
  if (!(duration_s > 0) || duration_us() <= 0) throw ConfigError("config.duration_s must be > 0");
  if (seeds.empty()) throw ConfigError("config.seeds must not be empty");
  if (!(radius_m > 0)) throw ConfigError("config.radius_m must be > 0");
  mac.validate();
  if (std::abs(mac.slot_us - std::round(mac.slot_us)) > 1e-9) {
    throw ConfigError("config.mac.slot_us must be a whole number of microseconds");
  }
  channel.validate();
  superframe.validate();
  lbt.validate();
  if (scheme == Scheme::WifiOnly && m_lte > 0) {
    warnings.push_back("scheme wifi-only ignores the " + std::to_string(m_lte) + " LTE-U users");
  }
  return warnings;
}

ScenarioConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  ScenarioConfig c;
  Reader r(j, "config",
           {"scheme", "n_wifi", "m_lte", "duration_s", "seeds", "radius_m", "access_mode",
            "write_traces", "mac", "channel", "superframe", "lbt"});
  std::string text;
  if (r.child("scheme")) {
    r.read("scheme", text);
    try {
      c.scheme = parse_scheme(text);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config.scheme: ") + e.what());
    }
  }
  r.read("n_wifi", c.n_wifi);
  r.read("m_lte", c.m_lte);
  r.read("duration_s", c.duration_s);
  r.read("radius_m", c.radius_m);
  r.read("write_traces", c.write_traces);
  if (r.child("access_mode")) {
    r.read("access_mode", text);
    try {
      c.access_mode = wifi::parse_access_mode(text);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config.access_mode: ") + e.what());
    }
  }
  if (const json* s = r.child("seeds")) {
    if (!s->is_array()) throw ConfigError("config.seeds: expected an array of integers");
    c.seeds.clear();
    for (std::size_t i = 0; i < s->size(); ++i) {
      const auto& v = (*s)[i];
      if (!v.is_number_unsigned()) {
        throw ConfigError("config.seeds[" + std::to_string(i) + "]: expected a non-negative integer");
      }
      c.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  if (const json* m = r.child("mac")) read_mac(*m, "config.mac", c.mac);
  if (const json* ch = r.child("channel")) read_channel(*ch, "config.channel", c.channel);
  if (const json* sf = r.child("superframe")) read_superframe(*sf, "config.superframe", c.superframe);
  if (const json* l = r.child("lbt")) read_lbt(*l, "config.lbt", c.lbt);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ScenarioConfig& c) {
  json j;
  j["scheme"] = std::string(to_string(c.scheme));
  j["n_wifi"] = c.n_wifi;
  j["m_lte"] = c.m_lte;
  j["duration_s"] = c.duration_s;
  j["seeds"] = c.seeds;
  j["radius_m"] = c.radius_m;
  j["access_mode"] = std::string(wifi::to_string(c.access_mode));
  j["write_traces"] = c.write_traces;
  j["mac"] = {{"slot_us", c.mac.slot_us},
              {"sifs_us", c.mac.sifs_us},
              {"difs_us", c.mac.difs_us},
              {"propagation_delay_us", c.mac.propagation_delay_us},
              {"phy_header_bits", c.mac.phy_header_bits},
              {"mac_header_bits", c.mac.mac_header_bits},
              {"ack_bits", c.mac.ack_bits},
              {"rts_bits", c.mac.rts_bits},
              {"cts_bits", c.mac.cts_bits},
              {"payload_bytes", c.mac.payload_bytes},
              {"channel_bit_rate_bps", c.mac.channel_bit_rate_bps},
              {"cw_min", c.mac.cw_min},
              {"cw_max", c.mac.cw_max},
              {"max_backoff_stage", c.mac.max_backoff_stage}};
  j["channel"] = {{"bandwidth_hz", c.channel.bandwidth_hz},
                  {"tx_power_dbm", c.channel.tx_power_dbm},
                  {"noise_density_dbm_hz", c.channel.noise_density_dbm_hz},
                  {"pathloss_exponent", c.channel.pathloss_exponent},
                  {"reference_loss_db", c.channel.reference_loss_db},
                  {"spectral_efficiency_cap", c.channel.spectral_efficiency_cap},
                  {"control_overhead", c.channel.control_overhead}};
  j["superframe"] = {{"repetition_interval_us", c.superframe.repetition_interval},
                     {"beacon_us", c.superframe.beacon_duration},
                     {"subframe_us", c.superframe.subframe},
                     {"header_us", c.superframe.header},
                     {"ack_us", c.superframe.ack}};
  j["lbt"] = {{"cca_us", c.lbt.cca},
              {"contention_window", c.lbt.contention_window},
              {"burst_us", c.lbt.burst},
              {"burst_subframes", c.lbt.burst_subframes}};
  if (c.lbt.duty_off) {
    j["lbt"]["duty_off_us"] = *c.lbt.duty_off;
  } else {
    j["lbt"]["duty_off_us"] = "fair";
  }
  return j.dump(2);
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const auto token = text.substr(pos, comma - pos);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
      throw ConfigError("bad seed '" + std::string(token) + "' in seed list");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace hapsim::scenario
