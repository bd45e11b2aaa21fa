// Command-line front end: fit, table, plotdata.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "anneal_noise/anneal_noise.hpp"

namespace {

using anneal_noise::RunConfig;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> function;
  std::optional<double> noise;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> grid_size;
  std::optional<std::string> out;
  std::optional<double> t_initial;
  std::optional<double> cooling;
  std::optional<std::uint64_t> steps;
  std::optional<double> t_final;
  std::optional<double> move_step;
  std::optional<double> bounds_min;
  std::optional<double> bounds_max;
  std::vector<std::uint64_t> seeds;
  std::vector<double> noise_levels;
};

void add_run_flags(CLI::App& cmd, Flags& f, bool table) {
  cmd.add_option("--config", f.config, "Flat JSON configuration file");
  cmd.add_option("--function", f.function, "Target function: square or sqrt");
  cmd.add_option("--noise", f.noise, "Noise level in percent of the bounds half-width");
  cmd.add_option("--seed", f.seed, "Seed (falls back to $ANNEAL_NOISE_SEED)");
  cmd.add_option("--grid-size", f.grid_size, "Evaluation grid points / refinement trials");
  cmd.add_option("--out", f.out, "Output directory");
  cmd.add_option("--t-initial", f.t_initial, "Initial annealing temperature");
  cmd.add_option("--cooling", f.cooling, "Cooling factor in (0, 1)");
  cmd.add_option("--steps", f.steps, "Proposals per temperature stage");
  cmd.add_option("--t-final", f.t_final, "Stop once the temperature drops below this");
  cmd.add_option("--move-step", f.move_step, "Move size as a fraction of the bounds half-width");
  cmd.add_option("--bounds-min", f.bounds_min, "Lower weight bound");
  cmd.add_option("--bounds-max", f.bounds_max, "Upper weight bound");
  if (table) {
    cmd.add_option("--seeds", f.seeds, "Seeds to run; a mean row is added when several")
        ->delimiter(',');
    cmd.add_option("--noise-levels", f.noise_levels, "Noise levels in percent")->delimiter(',');
  }
}

nlohmann::json overrides(const Flags& f) {
  nlohmann::json j = nlohmann::json::object();
  auto put = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("function", f.function);
  put("noise_percent", f.noise);
  put("seed", f.seed);
  put("grid_size", f.grid_size);
  put("out_dir", f.out);
  put("t_initial", f.t_initial);
  put("cooling_factor", f.cooling);
  put("steps_per_temperature", f.steps);
  put("t_final", f.t_final);
  put("move_step", f.move_step);
  put("bounds_min", f.bounds_min);
  put("bounds_max", f.bounds_max);
  if (!f.seeds.empty()) j["seeds"] = f.seeds;
  if (!f.noise_levels.empty()) j["noise_levels"] = f.noise_levels;
  return j;
}

RunConfig load(const Flags& f) {
  std::optional<std::string> env_seed;
  if (const char* s = std::getenv(anneal_noise::kSeedEnvVar)) env_seed = s;
  std::optional<std::filesystem::path> file;
  if (f.config) file = *f.config;
  return anneal_noise::parse_config(file, overrides(f), env_seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated annealing plus post-training noise refinement for small tanh networks"};
  app.require_subcommand(1);

  Flags fit_flags;
  auto* fit = app.add_subcommand("fit", "Train, refine and write trace.csv + network.txt");
  add_run_flags(*fit, fit_flags, false);

  Flags table_flags;
  auto* table = app.add_subcommand("table", "Final error per function and noise level -> table.csv");
  add_run_flags(*table, table_flags, true);

  std::string trace_path;
  std::optional<std::string> plot_out;
  auto* plot = app.add_subcommand("plotdata", "Turn a trace.csv into outputs.dat + errors.dat");
  plot->add_option("trace", trace_path, "trace.csv produced by fit")->required();
  plot->add_option("--out", plot_out, "Output directory (default: next to the trace)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) {
      const auto out = anneal_noise::cmd_fit(load(fit_flags));
      std::cout << "initial_error " << anneal_noise::format_double(out.result.initial_error) << '\n'
                << "final_error " << anneal_noise::format_double(out.result.final_error) << '\n'
                << "wrote " << out.trace_csv.string() << ", " << out.network_txt.string() << '\n';
    } else if (*table) {
      const auto out = anneal_noise::cmd_table(load(table_flags));
      std::cout << anneal_noise::table_to_csv(out.rows) << "wrote " << out.table_csv.string() << '\n';
    } else if (*plot) {
      const std::filesystem::path trace(trace_path);
      const auto dir = plot_out ? std::filesystem::path(*plot_out)
                                : (trace.has_parent_path() ? trace.parent_path() : ".");
      const auto out = anneal_noise::cmd_plotdata(trace, dir);
      std::cout << "wrote " << out.outputs_dat.string() << ", " << out.errors_dat.string() << '\n';
    }
  } catch (const anneal_noise::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const anneal_noise::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const anneal_noise::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
