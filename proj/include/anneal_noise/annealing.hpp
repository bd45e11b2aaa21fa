#pragma once

// Simulated-annealing trainer with Metropolis acceptance.

#include <algorithm>
#include <cmath>
#include <vector>

#include "anneal_noise/error.hpp"
#include "anneal_noise/network.hpp"
#include "anneal_noise/prng.hpp"

namespace anneal_noise {

struct AnnealingSchedule {
  double t_initial = 0.05;
  double cooling_factor = 0.6;  // alpha in (0, 1)
  int steps_per_temperature = 60;
  double t_final = 1e-3;
  double move_step = 0.1;  // fraction of the bounds half-width per move

  void validate() const {
    if (!(std::isfinite(t_initial) && t_initial > 0.0)) {
      throw InvalidInput("t_initial must be positive");
    }
    if (!(cooling_factor > 0.0 && cooling_factor < 1.0)) {
      throw InvalidInput("cooling_factor must lie in (0, 1)");
    }
    if (steps_per_temperature < 0) throw InvalidInput("steps_per_temperature must be >= 0");
    if (!(t_final > 0.0 && t_final < t_initial)) {
      throw InvalidInput("t_final must lie in (0, t_initial)");
    }
    if (!(move_step > 0.0 && move_step <= 1.0)) {
      throw InvalidInput("move_step must lie in (0, 1]");
    }
  }

  friend bool operator==(const AnnealingSchedule&, const AnnealingSchedule&) = default;
};

struct EnergySample {
  double temperature = 0.0;
  double energy = 0.0;  // current state at the end of the temperature stage
  double best = 0.0;    // best seen so far

  friend bool operator==(const EnergySample&, const EnergySample&) = default;
};

struct AnnealResult {
  Network best_network;
  double best_energy = 0.0;
  std::vector<EnergySample> energy_history;

  friend bool operator==(const AnnealResult&, const AnnealResult&) = default;
};

/// Metropolis test: draws R = next_unit() and accepts iff
/// R < exp(-delta_e / temperature). Always consumes exactly one draw.
template <UniformSource Rng>
bool accept_move(double delta_e, double temperature, Rng& rng) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw InvalidInput("accept_move: temperature must be positive");
  }
  if (!std::isfinite(delta_e)) throw InvalidInput("accept_move: delta_e is not finite");
  const double r = rng.next_unit();
  return r < std::exp(-delta_e / temperature);
}

namespace detail {

struct ParameterEdit {
  std::size_t index = 0;
  double previous = 0.0;
};

/// In-place form of propose_move; returns what is needed to undo it.
template <UniformSource Rng>
ParameterEdit perturb_one(Network& net, const WeightBounds& bounds, double step, Rng& rng) {
  const std::size_t count = net.parameter_count();
  auto index = static_cast<std::size_t>(rng.next_unit() * static_cast<double>(count));
  index = std::min(index, count - 1);
  const double offset = rng.next_symmetric() * step * bounds.half_width();
  double& p = net.parameter(index);
  const ParameterEdit edit{index, p};
  p = std::clamp(p + offset, bounds.min, bounds.max);
  return edit;
}

}  // namespace detail

/// Perturbs one uniformly chosen parameter by next_symmetric() * step *
/// half-width and clamps it into bounds. Draw order: index, then offset.
template <UniformSource Rng>
Network propose_move(const Network& net, const WeightBounds& bounds, double step, Rng& rng) {
  bounds.validate();
  if (!(step >= 0.0) || !std::isfinite(step)) throw InvalidInput("propose_move: bad step");
  Network candidate = net;
  detail::perturb_one(candidate, bounds, step, rng);
  return candidate;
}

/// Cools from t_initial by cooling_factor until the temperature drops below
/// t_final, running steps_per_temperature proposals per stage. Energy is the
/// RMS error on `data`. Returns the best network seen, not the last one.
template <UniformSource Rng>
AnnealResult anneal(const Network& net, const TrainingSet& data, const AnnealingSchedule& sched,
                    const WeightBounds& bounds, Rng& rng) {
  sched.validate();
  bounds.validate();
  data.validate();
  net.validate();
  if (!net.within(bounds)) throw InvalidInput("anneal: starting network lies outside bounds");

  AnnealResult result;
  Network current = net;
  double current_energy = rms_error(current, data);
  result.best_network = current;
  result.best_energy = current_energy;

  for (double t = sched.t_initial; t >= sched.t_final; t *= sched.cooling_factor) {
    for (int s = 0; s < sched.steps_per_temperature; ++s) {
      // Same draws as propose_move, applied in place and undone on rejection.
      const auto edit = detail::perturb_one(current, bounds, sched.move_step, rng);
      const double candidate_energy = rms_error(current, data);
      if (accept_move(candidate_energy - current_energy, t, rng)) {
        current_energy = candidate_energy;
        if (current_energy < result.best_energy) {
          result.best_network = current;
          result.best_energy = current_energy;
        }
      } else {
        current.parameter(edit.index) = edit.previous;
      }
    }
    result.energy_history.push_back({t, current_energy, result.best_energy});
  }
  return result;
}

}  // namespace anneal_noise
