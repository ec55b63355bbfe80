#pragma once

#include <iosfwd>

namespace noc {

// Fast oracle/invariant sweep for the `check` CLI subcommand: LQ instability
// and closed form, the linear-mu Riccati reduction, Jacobians against finite
// differences, envelope/minimality of the closed-form control, Omega_t
// identities, and a determinism micro-run. Prints one line per check and
// returns the number of failures.
int run_self_checks(std::ostream& out);

}  // namespace noc
