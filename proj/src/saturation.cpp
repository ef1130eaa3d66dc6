#include "hapsim/analytics/saturation.hpp"

#include <cmath>

#include "hapsim/error.hpp"

namespace hapsim::analytics {

double transmit_probability(double p, int w, int m) {
  // (1 - (2p)^m) / (1 - 2p) = sum_{k<m} (2p)^k
  double geometric = 0.0;
  double term = 1.0;
  for (int k = 0; k < m; ++k) {
    geometric += term;
    term *= 2.0 * p;
  }
  return 2.0 / (w + 1.0 + p * w * geometric);
}

SaturationModel solve_fixed_point(int n, int w, int m) {
  if (n < 1 || w < 2 || m < 0) throw Error("solve_fixed_point: need n >= 1, W >= 2, m >= 0");

  auto collision = [n](double tau) { return 1.0 - std::pow(1.0 - tau, n - 1); };
  auto gap = [&](double tau) { return tau - transmit_probability(collision(tau), w, m); };

  // gap(0) < 0 < gap(1) and gap is increasing.
  double lo = 0.0;
  double hi = 1.0;
  SaturationModel s{n, w, m};
  for (s.iterations = 1; s.iterations <= 200; ++s.iterations) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if (g == 0.0 || mid == lo || mid == hi) {
      lo = hi = mid;
      break;
    }
    (g < 0 ? lo : hi) = mid;
  }
  s.tau = 0.5 * (lo + hi);
  s.p = collision(s.tau);
  s.tau_residual = std::abs(s.tau - transmit_probability(s.p, w, m));
  s.p_residual = std::abs(s.p - collision(s.tau));
  if (s.tau_residual >= 1e-10 || s.p_residual >= 1e-10) {
    throw Error("solve_fixed_point did not converge");
  }
  return s;
}

double saturation_throughput(const SaturationModel& s, const wifi::MacTiming& timing,
                             wifi::AccessMode mode) {
  const auto d = wifi::exchange_durations(mode, timing);
  const double p_tr = 1.0 - std::pow(1.0 - s.tau, s.n);
  const double p_success = s.n * s.tau * std::pow(1.0 - s.tau, s.n - 1);
  const double p_idle = 1.0 - p_tr;
  const double p_collision = p_tr - p_success;
  const double slot_us =
      p_idle * timing.slot_us + p_success * d.success_us + p_collision * d.collision_us;
  return p_success * timing.payload_bits() / (slot_us * 1e-6);
}

double saturation_throughput(int n, const wifi::MacTiming& timing, wifi::AccessMode mode) {
  return saturation_throughput(solve_fixed_point(n, timing.cw_min, timing.max_backoff_stage),
                               timing, mode);
}

}  // namespace hapsim::analytics
