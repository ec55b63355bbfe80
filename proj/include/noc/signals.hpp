#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace noc {

enum class SignalKind { None, Sine, SignOfSine, PiecewiseWaves };

// [t_begin, t_end), wave 0 = sine piece, wave 1 = square piece.
struct WaveSegment {
  double t_begin = 0.0;
  double t_end = 0.0;
  int wave = 0;
};

// Task signal description.
//   Sine:           no input, z = amplitude * sin(2 pi f s)
//   SignOfSine:     u = amplitude * sin(2 pi f s), z = sign(u)
//   PiecewiseWaves: u alternates between a half-amplitude sine and a
//                   half-amplitude square wave on seeded random segments,
//                   ramped by 1 - exp(-s/psi); z = +1 on sine segments,
//                   -1 on square segments.
struct SignalSpec {
  SignalKind kind = SignalKind::None;
  double frequency = 0.0;  // Hz
  double amplitude = 1.0;
  double psi = 0.0;        // ramp time constant, piecewise only
  std::uint64_t schedule_seed = 0;
  double min_segment_periods = 2.0;
  double max_segment_periods = 6.0;

  // Filled by resolve_signal.
  double t_begin = 0.0;
  double t_end = -1.0;
  std::vector<WaveSegment> schedule;
};

int signal_input_dim(SignalKind kind);

// Validates the description, pins its time domain to [t0, T] and, for
// piecewise signals, materializes the segment schedule from schedule_seed.
// Segments alternate starting from the sine wave with durations uniform in
// [min, max] signal periods; the last one is truncated at T.
SignalSpec resolve_signal(SignalSpec spec, double t0, double T);

struct SignalSample {
  Eigen::VectorXd u;  // empty when the signal has no input channel
  double z = 0.0;
};

// Sample at time s in [t_begin, t_end]; requires a resolved spec.
SignalSample gen_signal(const SignalSpec& spec, double s);

}  // namespace noc
