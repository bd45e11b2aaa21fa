// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and thresholds are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "anneal_noise/anneal_noise.hpp"
#include "oracles.hpp"

using namespace anneal_noise;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Greedy monotonicity over 200 random scenarios, < 10 s.
Outcome greedy_monotonicity() {
  constexpr double kTimeLimit = 10.0;
  std::mt19937 seeds(20240601);
  const auto start = Clock::now();
  int scenarios = 0;
  for (int i = 0; i < 20; ++i) {
    for (auto f : {TargetFunction::square(), TargetFunction::sqrt()}) {
      for (double level : kDefaultNoiseLevels) {
        const auto r = run_scenario(Scenario::defaults(f, level, seeds()));
        ++scenarios;
        double running = r.initial_error;
        for (const auto& row : r.trace.rows) {
          if (row.classical_error != running) return {false, "classical error drifted from running value"};
          if (row.accepted) {
            if (!(row.quantum_error < running)) return {false, "accepted a non-improving trial"};
            running = row.quantum_error;
          }
        }
        if (!(r.final_error <= r.initial_error)) {
          return {false, fmt("final %.17g > initial %.17g", r.final_error, r.initial_error)};
        }
        if (r.final_error != running) return {false, "final error differs from last accepted value"};
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {scenarios == 200 && elapsed < kTimeLimit,
          fmt("%d scenarios, %.2f s (limit %.0f s)", scenarios, elapsed, kTimeLimit)};
}

// 2. 1000 backup / perturb / restore cycles are bit-exact.
Outcome restore_identity() {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<std::size_t> width(1, 8);
  Prng rng(4242);
  for (int cycle = 0; cycle < 1000; ++cycle) {
    const Network net = oracle::random_network(gen, {1, width(gen), 1}, 12.0);
    const Snapshot snap = backup_state(net);
    Network perturbed = add_hidden_noise(net, NoiseSpec{4.0 * (1 + cycle % 5), 1, {-12, 12}}, rng);
    perturbed = propose_move(perturbed, {-12, 12}, 1.0, rng);
    if (restore_state(perturbed, snap) != net) return {false, fmt("cycle %d not restored", cycle)};
  }
  return {true, "1000 cycles bit-exact"};
}

// 3. Metropolis acceptance frequencies.
Outcome metropolis_statistics() {
  constexpr int kCalls = 100000;
  constexpr double kExpected = 0.367879;
  constexpr double kTolerance = 0.005;
  Prng rng(31337);
  const double t = 0.05;
  int accepted = 0;
  for (int i = 0; i < kCalls; ++i) accepted += accept_move(t, t, rng);
  const double freq = static_cast<double>(accepted) / kCalls;
  int flat = 0;
  for (int i = 0; i < kCalls; ++i) flat += accept_move(0.0, t, rng);
  const double flat_freq = static_cast<double>(flat) / kCalls;
  return {std::abs(freq - kExpected) <= kTolerance && flat_freq == 1.0,
          fmt("dE=T: %.5f (target %.6f +- %.3f); dE=0: %.5f", freq, kExpected, kTolerance, flat_freq)};
}

// 4. MT19937 conformance.
Outcome prng_conformance() {
  Prng rng(5489);
  const std::uint32_t first = rng.next_u32();
  if (first != 3499211612u) return {false, fmt("first output %u", first)};
  Prng ours(5489);
  std::mt19937 reference(5489);
  for (int i = 0; i < 1000; ++i) {
    if (ours.next_u32() != reference()) return {false, fmt("mismatch at output %d", i)};
  }
  return {true, "first output 3499211612; 1000 outputs match std::mt19937"};
}

// 5. Forward pass vs brute force within 1e-12.
Outcome forward_oracle() {
  constexpr double kTolerance = 1e-12;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> xs(0.0, 1.0);
  std::uniform_real_distribution<double> scales(0.5, 12.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::vector<std::size_t> sizes{1, 4, 1};
    const Network net = oracle::random_network(gen, sizes, scales(gen));
    const double x = xs(gen);
    const double diff = std::abs(forward(net, x) -
                                 static_cast<double>(oracle::brute_force_forward(sizes, net.parameters(), x)));
    worst = std::max(worst, diff);
  }
  return {worst <= kTolerance, fmt("max |diff| %.3g over 1000 nets (tolerance %.0e)", worst, kTolerance)};
}

// 6. `fit` twice with identical config gives byte-identical artifacts.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome fit_determinism() {
  const fs::path root = fs::temp_directory_path() / ("anneal_noise_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path config = root / "run.json";
  std::ofstream(config) << R"({"function": "square", "noise_percent": 1.0, "seed": 2718})";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(ANNEAL_NOISE_CLI) + " fit --config " + config.string() +
                            " --out " + (root / run).string() + " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "fit exited nonzero"};
  }
  const bool trace_same = slurp(root / "a" / "trace.csv") == slurp(root / "b" / "trace.csv");
  const bool net_same = slurp(root / "a" / "network.txt") == slurp(root / "b" / "network.txt");
  const bool nonempty = !slurp(root / "a" / "trace.csv").empty();
  fs::remove_all(root);
  return {trace_same && net_same && nonempty,
          fmt("trace.csv %s, network.txt %s", trace_same ? "identical" : "DIFFERS",
              net_same ? "identical" : "DIFFERS")};
}

// 7. Statistical trend over 50 seeds, < 60 s.
Outcome trend_reproduction() {
  constexpr double kTimeLimit = 60.0;
  constexpr double kMinRelativeGain = 0.10;
  TableConfig cfg;
  cfg.seeds.clear();
  for (std::uint32_t s = 1; s <= 50; ++s) cfg.seeds.push_back(s);
  const auto start = Clock::now();
  const auto rows = run_table(cfg);
  const double elapsed = seconds_since(start);

  auto means = [&](TargetFunction f) {
    std::vector<double> m;
    for (const auto& r : rows) {
      if (r.function == f && !r.seed) m.push_back(r.final_error);
    }
    return m;
  };
  const auto sqrt_means = means(TargetFunction::sqrt());
  const auto square_means = means(TargetFunction::square());
  if (sqrt_means.size() != 5 || square_means.size() != 5) return {false, "unexpected table shape"};

  bool sqrt_decreasing = true;
  for (std::size_t i = 1; i < 5; ++i) sqrt_decreasing = sqrt_decreasing && sqrt_means[i] < sqrt_means[i - 1];
  const double sqrt_gain = 1.0 - sqrt_means[4] / sqrt_means[0];
  const double square_gain =
      1.0 - std::min(square_means[1], square_means[2]) / square_means[0];
  const bool pass = sqrt_decreasing && sqrt_gain >= kMinRelativeGain &&
                    square_gain >= kMinRelativeGain && elapsed < kTimeLimit;
  return {pass,
          fmt("sqrt means %.5f %.5f %.5f %.5f %.5f (%s, 4%% gain %.1f%%); "
              "square means %.5f %.5f %.5f %.5f %.5f (best of 0.5/1%% gain %.1f%%); %.2f s",
              sqrt_means[0], sqrt_means[1], sqrt_means[2], sqrt_means[3], sqrt_means[4],
              sqrt_decreasing ? "strictly decreasing" : "NOT decreasing", 100 * sqrt_gain,
              square_means[0], square_means[1], square_means[2], square_means[3], square_means[4],
              100 * square_gain, elapsed)};
}

// 8. Zero noise leaves the baseline untouched.
Outcome zero_noise_neutrality() {
  for (std::uint32_t seed : {1u, 17u, 123456u}) {
    for (auto f : {TargetFunction::square(), TargetFunction::sqrt()}) {
      const auto r = run_scenario(Scenario::defaults(f, 0.0, seed));
      if (r.refined_network != r.baseline_network || r.final_error != r.initial_error) {
        return {false, fmt("scenario seed %u changed the baseline", seed)};
      }
    }
  }
  TableConfig cfg;
  cfg.seeds = {1, 2, 3};
  for (const auto& row : run_table(cfg)) {
    if (row.noise_percent == 0.0 && row.final_error != row.initial_error) {
      return {false, "table row at 0% differs from initial error"};
    }
  }
  return {true, "0% scenarios and table rows equal the annealed baseline"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 greedy monotonicity", greedy_monotonicity},
      {"2 restore identity", restore_identity},
      {"3 metropolis statistics", metropolis_statistics},
      {"4 prng conformance", prng_conformance},
      {"5 forward oracle equivalence", forward_oracle},
      {"6 end-to-end determinism", fit_determinism},
      {"7 trend reproduction", trend_reproduction},
      {"8 zero-noise neutrality", zero_noise_neutrality},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
