#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hapsim/coex/hap.hpp"
#include "hapsim/coex/lbt.hpp"
#include "hapsim/radio/radio_env.hpp"
#include "hapsim/wifi/dcf.hpp"

namespace hapsim::scenario {

using sim::Micros;

enum class Scheme { WifiOnly, Lbt, HapUca, HapSa };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

struct ScenarioConfig {
  Scheme scheme = Scheme::WifiOnly;
  int n_wifi = 10;
  int m_lte = 0;
  double duration_s = 10.0;
  std::vector<std::uint64_t> seeds = {1};
  double radius_m = 100.0;
  wifi::AccessMode access_mode = wifi::AccessMode::Basic;
  bool write_traces = false;

  wifi::MacTiming mac;
  radio::ChannelParams channel;
  coex::SuperframeConfig superframe;
  coex::LbtParams lbt;

  Micros duration_us() const;
  /// M as simulated: wifi-only ignores LTE users.
  int effective_m() const { return scheme == Scheme::WifiOnly ? 0 : m_lte; }

  /// Throws ConfigError. Returns warnings for accepted-but-ignored settings.
  std::vector<std::string> validate() const;
};

/// Parses the JSON scenario format; missing fields keep their defaults.
/// Errors name the offending field path, e.g. "config.mac.slot_us".
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully resolved config as pretty-printed JSON.
std::string config_to_json(const ScenarioConfig& config);

std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace hapsim::scenario
