#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "noc/riccati_flow.hpp"

namespace noc {

// Shortest string that parses back to exactly the same double.
std::string format_double(double v);

// Columns, fixed order:
//   step,t,z,u,pi_x,lagrangian,omega_final,hamiltonian,
//   x0..x{n-1}, p0..p{n-1}, a0..a{c-1}
// The u column is the first input component, 0 when the run has no input.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::string& path,
                     const std::vector<TraceRecord>& trace);

// Inverse of write_trace_csv; block sizes are recovered from the header,
// input_dim (0 or 1) tells whether the u column is a real channel.
std::vector<TraceRecord> read_trace_csv(std::istream& in, int input_dim);
std::vector<TraceRecord> read_trace_csv(const std::string& path, int input_dim);

}  // namespace noc
