#pragma once

#include <stdexcept>
#include <string>

namespace noc {

// Invalid dimensions, malformed graphs, bad hyperparameters.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// r2 == 0 makes the closed-form control -p/r2 singular.
struct SingularControlError : std::runtime_error {
  explicit SingularControlError(const std::string& what) : std::runtime_error(what) {}
};

// Normal equations numerically singular (eps == 0 and J'J rank-deficient),
// or a closed-form expression degenerates.
struct NumericalRankError : std::runtime_error {
  explicit NumericalRankError(const std::string& what) : std::runtime_error(what) {}
};

// Signal queried outside its domain [t0, T].
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values during integration or descent; carries the step index.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, long at_step)
      : std::runtime_error(what + " (step " + std::to_string(at_step) + ")"),
        step(at_step) {}
  long step;
};

}  // namespace noc
