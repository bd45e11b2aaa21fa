#pragma once

// fit / table / plotdata, writing their artifacts to disk.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "anneal_noise/config.hpp"
#include "anneal_noise/error.hpp"
#include "anneal_noise/experiments.hpp"
#include "anneal_noise/network.hpp"
#include "anneal_noise/trace_io.hpp"

namespace anneal_noise {

namespace detail {

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

struct FitOutput {
  ExperimentResult result;
  std::filesystem::path trace_csv;
  std::filesystem::path network_txt;
};

/// Runs one scenario; writes trace.csv and the refined network.txt.
inline FitOutput cmd_fit(const RunConfig& cfg) {
  FitOutput out{run_scenario(cfg.scenario()), cfg.out_dir / "trace.csv", cfg.out_dir / "network.txt"};
  detail::ensure_directory(cfg.out_dir);
  detail::write_file(out.trace_csv, trace_to_csv(out.result.trace));
  detail::write_file(out.network_txt, serialize(out.result.refined_network));
  return out;
}

struct TableOutput {
  std::vector<TableRow> rows;
  std::filesystem::path table_csv;
};

inline TableOutput cmd_table(const RunConfig& cfg) {
  TableOutput out{run_table(cfg.table_config()), cfg.out_dir / "table.csv"};
  detail::ensure_directory(cfg.out_dir);
  detail::write_file(out.table_csv, table_to_csv(out.rows));
  return out;
}

struct PlotOutput {
  RefinementTrace trace;
  std::filesystem::path outputs_dat;
  std::filesystem::path errors_dat;
};

/// Converts a trace.csv into outputs.dat and errors.dat in `out_dir`.
inline PlotOutput cmd_plotdata(const std::filesystem::path& trace_file,
                               const std::filesystem::path& out_dir) {
  PlotOutput out{trace_from_csv(detail::read_file(trace_file)), out_dir / "outputs.dat",
                 out_dir / "errors.dat"};
  detail::ensure_directory(out_dir);
  detail::write_file(out.outputs_dat, outputs_dat(out.trace));
  detail::write_file(out.errors_dat, errors_dat(out.trace));
  return out;
}

}  // namespace anneal_noise
