#include "noc/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "noc/errors.hpp"

namespace noc {

namespace {

constexpr int kFixedColumns = 8;  // step,t,z,u,pi_x,lagrangian,omega_final,hamiltonian

double parse_double(const std::string& field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw ConfigError("trace CSV: cannot parse '" + field + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  if (trace.empty()) {
    out << "step,t,z,u,pi_x,lagrangian,omega_final,hamiltonian\n";
    return;
  }
  const int n = static_cast<int>(trace.front().x.size());
  const int c = static_cast<int>(trace.front().alpha.size());

  out << "step,t,z,u,pi_x,lagrangian,omega_final,hamiltonian";
  for (int i = 0; i < n; ++i) out << ",x" << i;
  for (int i = 0; i < n; ++i) out << ",p" << i;
  for (int i = 0; i < c; ++i) out << ",a" << i;
  out << "\n";

  for (const TraceRecord& rec : trace) {
    out << rec.step << ',' << format_double(rec.t) << ','
        << format_double(rec.z) << ','
        << format_double(rec.u.size() > 0 ? rec.u[0] : 0.0) << ','
        << format_double(rec.pi_x) << ',' << format_double(rec.lagrangian)
        << ',' << format_double(rec.omega_final) << ','
        << format_double(rec.hamiltonian);
    for (int i = 0; i < n; ++i) out << ',' << format_double(rec.x[i]);
    for (int i = 0; i < n; ++i) out << ',' << format_double(rec.p[i]);
    for (int i = 0; i < c; ++i) out << ',' << format_double(rec.alpha[i]);
    out << "\n";
  }
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  write_trace_csv(out, trace);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in, int input_dim) {
  if (input_dim < 0 || input_dim > 1)
    throw ConfigError("read_trace_csv supports input_dim 0 or 1");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace CSV: missing header");

  const std::vector<std::string> header = split_csv_line(line);
  int n = 0, c = 0;
  for (const std::string& name : header) {
    if (!name.empty() && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos)
      ++n;
    if (!name.empty() && name[0] == 'a' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos)
      ++c;
  }
  const std::size_t expected = std::size_t(kFixedColumns + 2 * n + c);

  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != expected)
      throw ConfigError("trace CSV: row has " + std::to_string(f.size()) +
                        " fields, expected " + std::to_string(expected));
    TraceRecord rec;
    rec.step = static_cast<int>(parse_double(f[0]));
    rec.t = parse_double(f[1]);
    rec.z = parse_double(f[2]);
    if (input_dim == 1) {
      rec.u.resize(1);
      rec.u[0] = parse_double(f[3]);
    }
    rec.pi_x = parse_double(f[4]);
    rec.lagrangian = parse_double(f[5]);
    rec.omega_final = parse_double(f[6]);
    rec.hamiltonian = parse_double(f[7]);
    rec.x.resize(n);
    rec.p.resize(n);
    rec.alpha.resize(c);
    for (int i = 0; i < n; ++i) rec.x[i] = parse_double(f[kFixedColumns + i]);
    for (int i = 0; i < n; ++i)
      rec.p[i] = parse_double(f[kFixedColumns + n + i]);
    for (int i = 0; i < c; ++i)
      rec.alpha[i] = parse_double(f[kFixedColumns + 2 * n + i]);
    trace.push_back(std::move(rec));
  }
  return trace;
}

std::vector<TraceRecord> read_trace_csv(const std::string& path, int input_dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_trace_csv(in, input_dim);
}

}  // namespace noc
