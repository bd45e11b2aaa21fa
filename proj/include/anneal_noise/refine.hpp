#pragma once

// Post-training refinement: inject seeded noise into the hidden-layer
// parameters, keep the perturbed network only if it strictly lowers the
// objective, otherwise restore the snapshot taken before the perturbation.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <vector>

#include "anneal_noise/error.hpp"
#include "anneal_noise/network.hpp"
#include "anneal_noise/prng.hpp"

namespace anneal_noise {

struct NoiseSpec {
  double noise_percent = 0.0;
  int iterations = 32;
  WeightBounds bounds{};

  void validate() const {
    if (!(std::isfinite(noise_percent) && noise_percent >= 0.0)) {
      throw InvalidInput("noise_percent must be a finite value >= 0");
    }
    if (iterations < 1) throw InvalidInput("iterations must be >= 1");
    bounds.validate();
  }

  /// Noise amplitude: noise_percent of the bounds half-width.
  double amplitude() const noexcept { return noise_percent / 100.0 * bounds.half_width(); }
};

/// Full copy of a network's parameters.
class Snapshot {
 public:
  explicit Snapshot(const Network& net) : shape_(net.layer_sizes().begin(), net.layer_sizes().end()),
                                          values_(net.parameters()) {}

  std::span<const std::size_t> shape() const noexcept { return shape_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

inline Snapshot backup_state(const Network& net) { return Snapshot(net); }

/// Writes the snapshot's parameters into a copy of `net`. Shapes must match.
inline Network restore_state(const Network& net, const Snapshot& snap) {
  const auto sizes = net.layer_sizes();
  if (!std::equal(sizes.begin(), sizes.end(), snap.shape().begin(), snap.shape().end())) {
    throw InvalidInput("restore_state: snapshot shape does not match network");
  }
  Network out = net;
  std::size_t k = 0;
  out.for_each_parameter([&](double& v) { v = snap.values()[k++]; });
  return out;
}

/// Adds next_symmetric() * amplitude to every incoming weight and bias of
/// every hidden layer, in canonical order. Output layer untouched; the
/// result is not clamped to the bounds.
template <UniformSource Rng>
Network add_hidden_noise(const Network& net, const NoiseSpec& spec, Rng& rng) {
  spec.validate();
  if (net.hidden_layer_count() == 0) throw InvalidInput("add_hidden_noise: network has no hidden layer");
  const double amplitude = spec.amplitude();
  Network out = net;
  auto layers = out.layers();
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    auto& layer = layers[l];
    for (std::size_t k = 0; k < layer.parameter_count(); ++k) {
      layer.parameter(k) += rng.next_symmetric() * amplitude;
    }
  }
  return out;
}

/// What refine() needs from the evaluation context.
template <typename O>
concept RefinementObjective = requires(const O& o, const Network& net, double x) {
  { o.error(net) } -> std::convertible_to<double>;
  { o.target(x) } -> std::convertible_to<double>;
  { o.eval_points() } -> std::convertible_to<std::span<const double>>;
};

struct TraceRow {
  int iteration = 0;  // 1-based
  double eval_x = 0.0;
  double target = 0.0;
  double classical_output = 0.0;
  double quantum_output = 0.0;
  double classical_error = 0.0;  // objective of the running network
  double quantum_error = 0.0;    // objective of the perturbed candidate
  bool accepted = false;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct RefinementTrace {
  std::vector<TraceRow> rows;

  friend bool operator==(const RefinementTrace&, const RefinementTrace&) = default;
};

struct RefineResult {
  Network network;
  RefinementTrace trace;
};

/// Greedy noise refinement. Iteration k evaluates at eval_points[(k-1) mod n].
/// Perturbations are cumulative: each trial starts from the last accepted
/// network. A trial is accepted only on strict improvement.
template <RefinementObjective Objective, UniformSource Rng>
RefineResult refine(const Network& net, const Objective& objective, const NoiseSpec& spec, Rng& rng) {
  spec.validate();
  net.validate();
  const std::span<const double> points = objective.eval_points();
  if (points.empty()) throw InvalidInput("refine: objective has no evaluation points");

  RefineResult result{net, {}};
  result.trace.rows.reserve(static_cast<std::size_t>(spec.iterations));
  double current_error = objective.error(result.network);

  for (int k = 1; k <= spec.iterations; ++k) {
    TraceRow row;
    row.iteration = k;
    row.eval_x = points[static_cast<std::size_t>(k - 1) % points.size()];
    row.target = objective.target(row.eval_x);
    row.classical_output = forward(result.network, row.eval_x);
    row.classical_error = current_error;

    const Snapshot saved = backup_state(result.network);
    result.network = add_hidden_noise(result.network, spec, rng);
    row.quantum_output = forward(result.network, row.eval_x);
    row.quantum_error = objective.error(result.network);

    if (row.quantum_error < current_error) {
      row.accepted = true;
      current_error = row.quantum_error;
    } else {
      result.network = restore_state(result.network, saved);
    }
    result.trace.rows.push_back(row);
  }
  return result;
}

}  // namespace anneal_noise
