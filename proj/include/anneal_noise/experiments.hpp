#pragma once

// Function-fitting experiments: x^2 and sqrt(x) learned from three points,
// annealed into a deliberately poor baseline, then refined at several noise
// levels and scored on an interior evaluation grid of [0, 1].

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "anneal_noise/annealing.hpp"
#include "anneal_noise/error.hpp"
#include "anneal_noise/network.hpp"
#include "anneal_noise/prng.hpp"
#include "anneal_noise/refine.hpp"

namespace anneal_noise {

class TargetFunction {
 public:
  enum class Kind { kSquare, kSqrt };

  constexpr TargetFunction(Kind kind = Kind::kSquare) noexcept : kind_(kind) {}

  static TargetFunction square() noexcept { return Kind::kSquare; }
  static TargetFunction sqrt() noexcept { return Kind::kSqrt; }

  static TargetFunction from_name(std::string_view name) {
    if (name == "square") return square();
    if (name == "sqrt") return sqrt();
    throw InvalidInput("unknown target function '" + std::string(name) + "'");
  }

  Kind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return kind_ == Kind::kSquare ? "square" : "sqrt"; }

  double operator()(double x) const noexcept {
    return kind_ == Kind::kSquare ? x * x : std::sqrt(x);
  }

  friend bool operator==(TargetFunction, TargetFunction) = default;

 private:
  Kind kind_;
};

inline constexpr std::size_t kDefaultGridSize = 32;
inline const std::vector<double> kDefaultNoiseLevels{0.0, 0.5, 1.0, 2.0, 4.0};
inline const std::vector<std::size_t> kDefaultLayerSizes{1, 4, 1};

/// The three literal training points for each target. The sqrt targets are
/// rounded to two decimals (0.38, not sqrt(0.15)).
inline TrainingSet training_set(TargetFunction f) {
  switch (f.kind()) {
    case TargetFunction::Kind::kSquare:
      return TrainingSet({{0.1, 0.01}, {0.5, 0.25}, {0.9, 0.81}});
    case TargetFunction::Kind::kSqrt:
      return TrainingSet({{0.15, 0.38}, {0.6, 0.77}, {0.85, 0.92}});
  }
  throw InvalidInput("unknown target function");
}

/// Weight-space bounds: +-12 for x^2, +-1 for sqrt(x).
inline WeightBounds default_bounds(TargetFunction f) {
  return f.kind() == TargetFunction::Kind::kSquare ? WeightBounds{-12.0, 12.0}
                                                   : WeightBounds{-1.0, 1.0};
}

/// Deliberately short cooling runs that stop in a local minimum, leaving
/// room for refinement. The +-12 box of the x^2 task saturates tanh after
/// random initialization and needs a hotter, longer run to reach a
/// comparable baseline.
inline AnnealingSchedule default_schedule(TargetFunction f) {
  if (f.kind() == TargetFunction::Kind::kSquare) {
    return AnnealingSchedule{.t_initial = 0.5,
                             .cooling_factor = 0.85,
                             .steps_per_temperature = 300,
                             .t_final = 1e-3,
                             .move_step = 0.1};
  }
  return AnnealingSchedule{.t_initial = 0.05,
                           .cooling_factor = 0.6,
                           .steps_per_temperature = 60,
                           .t_final = 1e-3,
                           .move_step = 0.1};
}

/// x_i = i / (n + 1), i = 1..n.
inline std::vector<double> evaluation_grid(std::size_t n) {
  if (n == 0) throw InvalidInput("evaluation grid needs at least one point");
  std::vector<double> grid(n);
  for (std::size_t i = 1; i <= n; ++i) {
    grid[i - 1] = static_cast<double>(i) / static_cast<double>(n + 1);
  }
  return grid;
}

/// RMS of forward(net, x) - f(x) over the grid.
inline double objective(const Network& net, TargetFunction f, std::span<const double> grid) {
  if (grid.empty()) throw InvalidInput("objective: empty grid");
  double sum = 0.0;
  for (double x : grid) {
    const double r = forward(net, x) - f(x);
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(grid.size()));
}

/// Ground-truth grid objective, in the form refine() consumes.
class GridObjective {
 public:
  GridObjective(TargetFunction f, std::vector<double> grid) : f_(f), grid_(std::move(grid)) {
    if (grid_.empty()) throw InvalidInput("GridObjective: empty grid");
  }

  double error(const Network& net) const { return objective(net, f_, grid_); }
  double target(double x) const { return f_(x); }
  std::span<const double> eval_points() const noexcept { return grid_; }

 private:
  TargetFunction f_;
  std::vector<double> grid_;
};

static_assert(RefinementObjective<GridObjective>);

struct Scenario {
  TargetFunction function;
  double noise_percent = 0.0;
  std::uint32_t seed = 1;
  AnnealingSchedule schedule{};
  WeightBounds bounds{};
  std::size_t grid_size = kDefaultGridSize;

  static Scenario defaults(TargetFunction f, double noise_percent = 0.0, std::uint32_t seed = 1) {
    Scenario s;
    s.function = f;
    s.noise_percent = noise_percent;
    s.seed = seed;
    s.bounds = default_bounds(f);
    s.schedule = default_schedule(f);
    return s;
  }

  void validate() const {
    schedule.validate();
    bounds.validate();
    if (grid_size == 0) throw InvalidInput("grid_size must be >= 1");
    if (!(std::isfinite(noise_percent) && noise_percent >= 0.0)) {
      throw InvalidInput("noise_percent must be a finite value >= 0");
    }
  }
};

/// Annealed network plus the generator state it left behind; refinement
/// continues from that state.
struct Baseline {
  Network network;
  double initial_error = 0.0;
  Prng rng;
};

struct ExperimentResult {
  Scenario scenario;
  double initial_error = 0.0;
  double final_error = 0.0;
  RefinementTrace trace;
  Network baseline_network;
  Network refined_network;
  std::vector<double> baseline_outputs;
  std::vector<double> refined_outputs;
};

/// init_random then anneal on the training set, seeded from the scenario.
inline Baseline train_baseline(const Scenario& s) {
  s.validate();
  Prng rng(s.seed);
  Network initial = init_random(kDefaultLayerSizes, s.bounds, rng);
  AnnealResult trained = anneal(initial, training_set(s.function), s.schedule, s.bounds, rng);
  const auto grid = evaluation_grid(s.grid_size);
  const double err = objective(trained.best_network, s.function, grid);
  return Baseline{std::move(trained.best_network), err, rng};
}

/// Refines a copy of the baseline; the baseline itself is left untouched so
/// it can be shared across noise levels.
inline ExperimentResult refine_baseline(const Baseline& base, const Scenario& s) {
  s.validate();
  Prng rng = base.rng;
  GridObjective obj(s.function, evaluation_grid(s.grid_size));
  NoiseSpec spec{s.noise_percent, static_cast<int>(s.grid_size), s.bounds};
  RefineResult refined = refine(base.network, obj, spec, rng);

  ExperimentResult out;
  out.scenario = s;
  out.initial_error = base.initial_error;
  out.final_error = obj.error(refined.network);
  out.trace = std::move(refined.trace);
  out.baseline_network = base.network;
  out.refined_network = std::move(refined.network);
  for (double x : obj.eval_points()) {
    out.baseline_outputs.push_back(forward(out.baseline_network, x));
    out.refined_outputs.push_back(forward(out.refined_network, x));
  }
  return out;
}

inline ExperimentResult run_scenario(const Scenario& s) { return refine_baseline(train_baseline(s), s); }

struct TableConfig {
  std::vector<TargetFunction> functions{TargetFunction::square(), TargetFunction::sqrt()};
  std::vector<double> noise_levels = kDefaultNoiseLevels;
  std::vector<std::uint32_t> seeds{1};
  std::optional<AnnealingSchedule> schedule;  // per-function default when empty
  std::size_t grid_size = kDefaultGridSize;
  std::optional<WeightBounds> bounds;  // per-function default when empty
  unsigned workers = 0;                // 0: hardware concurrency
};

struct TableRow {
  TargetFunction function;
  double noise_percent = 0.0;
  std::optional<std::uint32_t> seed;  // empty on the per-level mean row
  double initial_error = 0.0;
  double final_error = 0.0;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

/// One row per (function, noise level, seed), ordered function-major, then
/// noise level, then seed. With more than one seed each (function, noise)
/// group is followed by a mean row. Each (function, seed) baseline is
/// annealed once and shared by all its noise levels. Output does not depend
/// on the worker count.
inline std::vector<TableRow> run_table(const TableConfig& cfg) {
  if (cfg.functions.empty()) throw InvalidInput("run_table: no functions");
  if (cfg.noise_levels.empty()) throw InvalidInput("run_table: no noise levels");
  if (cfg.seeds.empty()) throw InvalidInput("run_table: no seeds");

  const std::size_t n_fn = cfg.functions.size();
  const std::size_t n_seed = cfg.seeds.size();
  const std::size_t n_noise = cfg.noise_levels.size();

  auto scenario_for = [&](std::size_t fi, std::size_t si, std::size_t ni) {
    Scenario s = Scenario::defaults(cfg.functions[fi], cfg.noise_levels[ni], cfg.seeds[si]);
    if (cfg.schedule) s.schedule = *cfg.schedule;
    s.grid_size = cfg.grid_size;
    if (cfg.bounds) s.bounds = *cfg.bounds;
    s.validate();
    return s;
  };
  for (std::size_t ni = 0; ni < n_noise; ++ni) scenario_for(0, 0, ni);

  // results[(fi * n_seed + si) * n_noise + ni] = (initial, final)
  std::vector<std::pair<double, double>> results(n_fn * n_seed * n_noise);
  std::atomic<std::size_t> next_job{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t job = next_job++; job < n_fn * n_seed && !failed; job = next_job++) {
      try {
        const std::size_t fi = job / n_seed;
        const std::size_t si = job % n_seed;
        const Baseline base = train_baseline(scenario_for(fi, si, 0));
        for (std::size_t ni = 0; ni < n_noise; ++ni) {
          const ExperimentResult r = refine_baseline(base, scenario_for(fi, si, ni));
          results[job * n_noise + ni] = {r.initial_error, r.final_error};
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_fn * n_seed));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TableRow> rows;
  for (std::size_t fi = 0; fi < n_fn; ++fi) {
    for (std::size_t ni = 0; ni < n_noise; ++ni) {
      double sum_initial = 0.0;
      double sum_final = 0.0;
      for (std::size_t si = 0; si < n_seed; ++si) {
        const auto [initial, final_error] = results[(fi * n_seed + si) * n_noise + ni];
        rows.push_back({cfg.functions[fi], cfg.noise_levels[ni], cfg.seeds[si], initial, final_error});
        sum_initial += initial;
        sum_final += final_error;
      }
      if (n_seed > 1) {
        const double n = static_cast<double>(n_seed);
        rows.push_back({cfg.functions[fi], cfg.noise_levels[ni], std::nullopt, sum_initial / n,
                        sum_final / n});
      }
    }
  }
  return rows;
}

}  // namespace anneal_noise
