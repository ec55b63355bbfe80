#pragma once

#include <cmath>
#include <string>

namespace noc {

enum class Activation { Tanh, Relu, Linear };

// Pointwise nonlinearity plus the multiplier applied to the -y leak term of
// the CTRNN update. leak_scale = 0.5 gives the downscaled-leak variant used
// by the tracking experiments.
struct ActivationSpec {
  Activation kind = Activation::Tanh;
  double leak_scale = 1.0;
};

inline double activation_value(Activation kind, double v) {
  switch (kind) {
    case Activation::Tanh: return std::tanh(v);
    case Activation::Relu: return v > 0.0 ? v : 0.0;
    case Activation::Linear: return v;
  }
  return v;
}

// relu'(0) is taken as 0.
inline double activation_deriv(Activation kind, double v) {
  switch (kind) {
    case Activation::Tanh: {
      const double t = std::tanh(v);
      return 1.0 - t * t;
    }
    case Activation::Relu: return v > 0.0 ? 1.0 : 0.0;
    case Activation::Linear: return 1.0;
  }
  return 1.0;
}

Activation parse_activation(const std::string& name);
std::string activation_name(Activation kind);

}  // namespace noc
