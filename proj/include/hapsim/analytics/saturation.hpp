#pragma once

#include "hapsim/wifi/dcf.hpp"

namespace hapsim::analytics {

/// Saturated DCF fixed point: per-slot transmit probability tau and
/// conditional collision probability p for n contenders.
struct SaturationModel {
  int n = 0;
  int w = 0;
  int m = 0;
  double tau = 0;
  double p = 0;
  double tau_residual = 0;
  double p_residual = 0;
  int iterations = 0;
};

/// tau as a function of p: 2(1-2p) / ((1-2p)(W+1) + pW(1-(2p)^m)), evaluated
/// through the geometric sum so p = 1/2 is regular.
double transmit_probability(double p, int w, int m);

/// Bisection on tau in (0, 1). Throws if the residual is still above 1e-10
/// after 200 iterations.
SaturationModel solve_fixed_point(int n, int w, int m);

double saturation_throughput(const SaturationModel& model, const wifi::MacTiming& timing,
                             wifi::AccessMode mode);

double saturation_throughput(int n, const wifi::MacTiming& timing, wifi::AccessMode mode);

}  // namespace hapsim::analytics
