#pragma once

#include <utility>
#include <vector>

#include "noc/riccati_flow.hpp"

namespace noc {

// Running mean of the Lagrangian by left Riemann sum:
// mean_j = (sum_{k<j} l_k * tau) / (j * tau), reported at s = t0 + j*tau
// for j = 1..N.
std::vector<std::pair<double, double>> average_lagrangian(
    const std::vector<TraceRecord>& trace, double tau, double t0);

struct TrackingRms {
  double first = 0.0;
  double last = 0.0;
};

// RMS of (pi(x) - z) over the first and last `window` seconds of the trace.
TrackingRms tracking_error(const std::vector<TraceRecord>& trace,
                           double window_seconds);

}  // namespace noc
