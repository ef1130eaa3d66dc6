#pragma once

#include <vector>

#include "hapsim/sim/rng.hpp"

namespace hapsim::radio {

struct ChannelParams {
  double bandwidth_hz = 2.0e7;
  double tx_power_dbm = 30.0;
  double noise_density_dbm_hz = -174.0;
  double pathloss_exponent = 5.0;
  /// Free-space loss at 1 m near 5 GHz.
  double reference_loss_db = 46.4;
  double spectral_efficiency_cap = 6.0;
  /// Fraction of each subframe spent on the control region (2 of 14 symbols).
  double control_overhead = 2.0 / 14.0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct NodePosition {
  double x = 0.0;
  double y = 0.0;

  double distance() const;
};

struct LinkBudget {
  double distance_m = 0.0;
  double pathloss_db = 0.0;
  double fading_gain = 1.0;
  double snr = 0.0;
};

/// Positions i.i.d. uniform on the disk of the given radius centred on the HAP.
std::vector<NodePosition> place_users(int count, double radius, sim::RngStream& rng);

/// Log-distance loss; distances below 1 m are clamped to 1 m.
double path_loss_db(double distance_m, const ChannelParams& params);

/// Rayleigh block fading power gain: exponential with unit mean.
double fading_gain(sim::RngStream& rng);

double noise_power_dbm(const ChannelParams& params);

double dbm_to_mw(double dbm);

LinkBudget link_budget(double distance_m, double fading, const ChannelParams& params);

inline double mean_snr(double distance_m, const ChannelParams& params) {
  return link_budget(distance_m, 1.0, params).snr;
}

/// bandwidth * min(log2(1 + snr), cap) * (1 - control overhead), in bit/s.
double lte_rate(double snr, const ChannelParams& params);

}  // namespace hapsim::radio
