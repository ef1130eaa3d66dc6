#include "hapsim/radio/radio_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hapsim/error.hpp"

namespace hapsim::radio {

void ChannelParams::validate() const {
  if (!(bandwidth_hz > 0)) throw ConfigError("channel.bandwidth_hz must be > 0");
  if (!(pathloss_exponent > 0)) throw ConfigError("channel.pathloss_exponent must be > 0");
  if (!(control_overhead >= 0 && control_overhead < 1)) {
    throw ConfigError("channel.control_overhead must lie in [0, 1)");
  }
  if (!(spectral_efficiency_cap > 0)) throw ConfigError("channel.spectral_efficiency_cap must be > 0");
}

double NodePosition::distance() const { return std::hypot(x, y); }

std::vector<NodePosition> place_users(int count, double radius, sim::RngStream& rng) {
  if (count < 0) throw Error("place_users: negative count");
  if (!(radius > 0)) throw Error("place_users: radius must be positive");
  std::vector<NodePosition> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    out.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

double path_loss_db(double distance_m, const ChannelParams& params) {
  const double d = std::max(distance_m, 1.0);
  return params.reference_loss_db + 10.0 * params.pathloss_exponent * std::log10(d);
}

double fading_gain(sim::RngStream& rng) { return rng.exponential(1.0); }

double noise_power_dbm(const ChannelParams& params) {
  return params.noise_density_dbm_hz + 10.0 * std::log10(params.bandwidth_hz);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

LinkBudget link_budget(double distance_m, double fading, const ChannelParams& params) {
  LinkBudget lb;
  lb.distance_m = distance_m;
  lb.pathloss_db = path_loss_db(distance_m, params);
  lb.fading_gain = fading;
  const double signal_mw = dbm_to_mw(params.tx_power_dbm) * fading / dbm_to_mw(lb.pathloss_db);
  const double noise_mw = dbm_to_mw(params.noise_density_dbm_hz) * params.bandwidth_hz;
  lb.snr = signal_mw / noise_mw;
  return lb;
}

double lte_rate(double snr, const ChannelParams& params) {
  if (snr < 0) throw Error("lte_rate: negative snr");
  const double efficiency = std::min(std::log2(1.0 + snr), params.spectral_efficiency_cap);
  return params.bandwidth_hz * efficiency * (1.0 - params.control_overhead);
}

}  // namespace hapsim::radio
