#include "noc/signals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "noc/errors.hpp"
#include "noc/rng.hpp"

namespace noc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double square_wave(double frequency, double s) {
  // -(1/2) (-1)^floor(2 f s), before amplitude scaling
  const long long k = static_cast<long long>(std::floor(2.0 * frequency * s));
  return (k % 2 == 0) ? -0.5 : 0.5;
}

}  // namespace

int signal_input_dim(SignalKind kind) {
  switch (kind) {
    case SignalKind::None:
    case SignalKind::Sine: return 0;
    case SignalKind::SignOfSine:
    case SignalKind::PiecewiseWaves: return 1;
  }
  return 0;
}

SignalSpec resolve_signal(SignalSpec spec, double t0, double T) {
  if (T <= t0) throw ConfigError("signal domain is empty");
  if (spec.kind != SignalKind::None && spec.frequency <= 0.0)
    throw ConfigError("signal frequency must be > 0");
  spec.t_begin = t0;
  spec.t_end = T;
  spec.schedule.clear();

  if (spec.kind == SignalKind::PiecewiseWaves) {
    if (spec.psi <= 0.0) throw ConfigError("piecewise signal needs psi > 0");
    if (spec.min_segment_periods <= 0.0 ||
        spec.max_segment_periods < spec.min_segment_periods)
      throw ConfigError("bad segment period range");
    SplitMix64 rng(spec.schedule_seed);
    const double period = 1.0 / spec.frequency;
    double t = t0;
    int wave = 0;
    while (t < T) {
      const double periods =
          spec.min_segment_periods +
          (spec.max_segment_periods - spec.min_segment_periods) * rng.uniform();
      const double end = std::min(t + periods * period, T);
      spec.schedule.push_back({t, end, wave});
      t = end;
      wave ^= 1;
    }
  }
  return spec;
}

SignalSample gen_signal(const SignalSpec& spec, double s) {
  if (spec.t_end <= spec.t_begin)
    throw ConfigError("gen_signal needs a resolved spec");
  if (s < spec.t_begin || s > spec.t_end)
    throw DomainError("signal time " + std::to_string(s) + " outside [" +
                      std::to_string(spec.t_begin) + ", " +
                      std::to_string(spec.t_end) + "]");

  SignalSample out;
  switch (spec.kind) {
    case SignalKind::None:
      break;
    case SignalKind::Sine:
      out.z = spec.amplitude * std::sin(kTwoPi * spec.frequency * s);
      break;
    case SignalKind::SignOfSine: {
      const double u0 = spec.amplitude * std::sin(kTwoPi * spec.frequency * s);
      out.u.resize(1);
      out.u[0] = u0;
      out.z = u0 >= 0.0 ? 1.0 : -1.0;
      break;
    }
    case SignalKind::PiecewiseWaves: {
      // last segment whose start is <= s; segments are half-open except the
      // final one, closed at t_end
      auto it = std::upper_bound(
          spec.schedule.begin(), spec.schedule.end(), s,
          [](double v, const WaveSegment& seg) { return v < seg.t_begin; });
      if (it == spec.schedule.begin())
        throw DomainError("no wave segment at requested time");
      const WaveSegment& seg = *std::prev(it);
      const double raw =
          seg.wave == 0
              ? 0.5 * spec.amplitude * std::sin(kTwoPi * spec.frequency * s)
              : spec.amplitude * square_wave(spec.frequency, s);
      const double ramp = 1.0 - std::exp(-s / spec.psi);
      out.u.resize(1);
      out.u[0] = ramp * raw;
      out.z = seg.wave == 0 ? 1.0 : -1.0;
      break;
    }
  }
  return out;
}

}  // namespace noc
