#include "noc/analytics.hpp"

#include <cmath>

#include "noc/errors.hpp"

namespace noc {

std::vector<std::pair<double, double>> average_lagrangian(
    const std::vector<TraceRecord>& trace, double tau, double t0) {
  if (tau <= 0.0) throw ConfigError("average_lagrangian needs tau > 0");
  std::vector<std::pair<double, double>> out;
  out.reserve(trace.size());
  double integral = 0.0;
  for (std::size_t j = 1; j <= trace.size(); ++j) {
    integral += trace[j - 1].lagrangian * tau;
    out.emplace_back(t0 + double(j) * tau, integral / (double(j) * tau));
  }
  return out;
}

TrackingRms tracking_error(const std::vector<TraceRecord>& trace,
                           double window_seconds) {
  if (trace.empty()) throw ConfigError("tracking_error needs a nonempty trace");
  if (window_seconds <= 0.0) throw ConfigError("tracking_error needs window > 0");
  const double t_first = trace.front().t;
  const double t_last = trace.back().t;

  double acc_first = 0.0, acc_last = 0.0;
  std::size_t n_first = 0, n_last = 0;
  for (const TraceRecord& rec : trace) {
    const double err = rec.pi_x - rec.z;
    if (rec.t <= t_first + window_seconds) {
      acc_first += err * err;
      ++n_first;
    }
    if (rec.t >= t_last - window_seconds) {
      acc_last += err * err;
      ++n_last;
    }
  }
  return {std::sqrt(acc_first / double(n_first)),
          std::sqrt(acc_last / double(n_last))};
}

}  // namespace noc
