#pragma once

// CSV and column-file formats. Comma separated, '\n' line endings, one
// header row, reals at 17 significant digits so parsing restores them
// exactly.

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "anneal_noise/error.hpp"
#include "anneal_noise/experiments.hpp"
#include "anneal_noise/network.hpp"
#include "anneal_noise/refine.hpp"

namespace anneal_noise {

inline constexpr std::string_view kTraceHeader =
    "iteration,eval_x,target,classical_output,quantum_output,classical_error,quantum_error,accepted";
inline constexpr std::string_view kTableHeader = "function,noise_percent,seed,initial_error,final_error";

using detail::format_double;

inline std::string trace_to_csv(const RefinementTrace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : trace.rows) {
    out += std::to_string(r.iteration);
    for (double v : {r.eval_x, r.target, r.classical_output, r.quantum_output, r.classical_error,
                     r.quantum_error}) {
      out += ',';
      out += format_double(v);
    }
    out += r.accepted ? ",1\n" : ",0\n";
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace detail

/// Inverse of trace_to_csv. Errors carry the 1-based line number.
inline RefinementTrace trace_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(line_no, "empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw ParseError(line_no, "unexpected header");

  RefinementTrace trace;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_commas(line);
    if (fields.size() != 8) {
      throw ParseError(line_no, "expected 8 fields, found " + std::to_string(fields.size()));
    }
    TraceRow row;
    double iteration = 0.0;
    if (!detail::parse_double(fields[0], iteration) || iteration < 1 ||
        iteration != std::floor(iteration) || iteration > 1e9) {
      throw ParseError(line_no, "bad iteration '" + std::string(fields[0]) + "'");
    }
    row.iteration = static_cast<int>(iteration);
    double* targets[] = {&row.eval_x,         &row.target,          &row.classical_output,
                         &row.quantum_output, &row.classical_error, &row.quantum_error};
    for (std::size_t i = 0; i < 6; ++i) {
      if (!detail::parse_double(fields[i + 1], *targets[i]) || !std::isfinite(*targets[i])) {
        throw ParseError(line_no, "bad value '" + std::string(fields[i + 1]) + "'");
      }
    }
    if (fields[7] == "1") {
      row.accepted = true;
    } else if (fields[7] != "0") {
      throw ParseError(line_no, "accepted must be 0 or 1");
    }
    trace.rows.push_back(row);
  }
  return trace;
}

inline std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::string out(kTableHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.function.name();
    out += ',' + format_double(r.noise_percent);
    out += ',' + (r.seed ? std::to_string(*r.seed) : std::string("mean"));
    out += ',' + format_double(r.initial_error);
    out += ',' + format_double(r.final_error);
    out += '\n';
  }
  return out;
}

/// "x target classical quantum" per trace row.
inline std::string outputs_dat(const RefinementTrace& trace) {
  std::string out = "# x target classical quantum\n";
  for (const auto& r : trace.rows) {
    out += format_double(r.eval_x) + ' ' + format_double(r.target) + ' ' +
           format_double(r.classical_output) + ' ' + format_double(r.quantum_output) + '\n';
  }
  return out;
}

/// "iteration classical_error quantum_error" per trace row.
inline std::string errors_dat(const RefinementTrace& trace) {
  std::string out = "# iteration classical_error quantum_error\n";
  for (const auto& r : trace.rows) {
    out += std::to_string(r.iteration) + ' ' + format_double(r.classical_error) + ' ' +
           format_double(r.quantum_error) + '\n';
  }
  return out;
}

}  // namespace anneal_noise
