#include "noc/activation.hpp"

#include "noc/errors.hpp"

namespace noc {

Activation parse_activation(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  if (name == "linear") return Activation::Linear;
  throw ConfigError("unknown activation '" + name + "'");
}

std::string activation_name(Activation kind) {
  switch (kind) {
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Linear: return "linear";
  }
  return "tanh";
}

}  // namespace noc
