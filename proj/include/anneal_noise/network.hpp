#pragma once

// Fully connected feedforward network with tanh on every non-input neuron.
//
// Parameter order (used by init_random, the move kernel, noise injection
// and serialization) is layer-major, then neuron, then that neuron's
// incoming weights in input order, then its bias. Every routine that
// consumes random numbers per parameter walks this order.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "anneal_noise/error.hpp"
#include "anneal_noise/prng.hpp"

namespace anneal_noise {

struct WeightBounds {
  double min = -1.0;
  double max = 1.0;

  void validate() const {
    if (!std::isfinite(min) || !std::isfinite(max)) {
      throw InvalidInput("weight bounds must be finite");
    }
    if (!(min < max)) throw InvalidInput("weight bounds require min < max");
  }

  bool contains(double v) const noexcept { return v >= min && v <= max; }
  double width() const noexcept { return max - min; }
  double half_width() const noexcept { return 0.5 * (max - min); }

  friend bool operator==(const WeightBounds&, const WeightBounds&) = default;
};

struct TrainingPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const TrainingPoint&, const TrainingPoint&) = default;
};

class TrainingSet {
 public:
  TrainingSet() = default;
  explicit TrainingSet(std::vector<TrainingPoint> points) : points_(std::move(points)) {
    validate();
  }

  void validate() const {
    if (points_.empty()) throw InvalidInput("training set is empty");
    for (const auto& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw InvalidInput("training set contains a non-finite value");
      }
    }
  }

  std::span<const TrainingPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  friend bool operator==(const TrainingSet&, const TrainingSet&) = default;

 private:
  std::vector<TrainingPoint> points_;
};

/// One non-input layer. weights is row-major: weight(j, i) connects input i
/// to neuron j.
struct Layer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  double& weight(std::size_t j, std::size_t i) { return weights[j * inputs + i]; }
  double weight(std::size_t j, std::size_t i) const { return weights[j * inputs + i]; }

  std::size_t parameter_count() const noexcept { return outputs * (inputs + 1); }

  /// Parameter k of this layer in canonical order.
  double& parameter(std::size_t k) {
    const std::size_t j = k / (inputs + 1);
    const std::size_t r = k % (inputs + 1);
    return r < inputs ? weights[j * inputs + r] : biases[j];
  }
  double parameter(std::size_t k) const { return const_cast<Layer&>(*this).parameter(k); }

  friend bool operator==(const Layer&, const Layer&) = default;
};

inline void validate_layer_sizes(std::span<const std::size_t> sizes) {
  if (sizes.size() < 2) throw InvalidInput("network needs at least an input and an output layer");
  for (auto s : sizes) {
    if (s == 0) throw InvalidInput("layer sizes must be positive");
  }
}

class Network {
 public:
  Network() : Network(std::vector<std::size_t>{1, 4, 1}) {}

  /// All parameters zero.
  explicit Network(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
    validate_layer_sizes(sizes_);
    layers_.reserve(sizes_.size() - 1);
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
      Layer layer;
      layer.inputs = sizes_[l - 1];
      layer.outputs = sizes_[l];
      layer.weights.assign(layer.inputs * layer.outputs, 0.0);
      layer.biases.assign(layer.outputs, 0.0);
      layers_.push_back(std::move(layer));
    }
  }

  std::span<const std::size_t> layer_sizes() const noexcept { return sizes_; }
  std::span<Layer> layers() noexcept { return layers_; }
  std::span<const Layer> layers() const noexcept { return layers_; }

  /// Hidden layers are every non-input layer except the last.
  std::size_t hidden_layer_count() const noexcept { return layers_.size() - 1; }

  std::size_t parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& layer : layers_) n += layer.parameter_count();
    return n;
  }

  /// Global parameter k in canonical order.
  double& parameter(std::size_t k) {
    for (auto& layer : layers_) {
      if (k < layer.parameter_count()) return layer.parameter(k);
      k -= layer.parameter_count();
    }
    throw InvalidInput("parameter index out of range");
  }
  double parameter(std::size_t k) const { return const_cast<Network&>(*this).parameter(k); }

  template <typename F>
  void for_each_parameter(F&& f) {
    for (auto& layer : layers_) {
      for (std::size_t k = 0; k < layer.parameter_count(); ++k) f(layer.parameter(k));
    }
  }
  template <typename F>
  void for_each_parameter(F&& f) const {
    for (const auto& layer : layers_) {
      for (std::size_t k = 0; k < layer.parameter_count(); ++k) f(layer.parameter(k));
    }
  }

  std::vector<double> parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for_each_parameter([&](double v) { out.push_back(v); });
    return out;
  }

  /// Shape consistency and finiteness of every parameter.
  void validate() const {
    validate_layer_sizes(sizes_);
    if (layers_.size() + 1 != sizes_.size()) throw InvalidInput("layer count mismatch");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const auto& layer = layers_[l];
      if (layer.inputs != sizes_[l] || layer.outputs != sizes_[l + 1] ||
          layer.weights.size() != layer.inputs * layer.outputs ||
          layer.biases.size() != layer.outputs) {
        throw InvalidInput("layer " + std::to_string(l + 1) + " has inconsistent dimensions");
      }
    }
    bool finite = true;
    for_each_parameter([&](double v) { finite = finite && std::isfinite(v); });
    if (!finite) throw InvalidInput("network contains a non-finite parameter");
  }

  bool within(const WeightBounds& bounds) const {
    bool ok = true;
    for_each_parameter([&](double v) { ok = ok && bounds.contains(v); });
    return ok;
  }

  bool same_shape(const Network& other) const {
    return std::equal(sizes_.begin(), sizes_.end(), other.sizes_.begin(), other.sizes_.end());
  }

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<Layer> layers_;
};

namespace detail {

template <typename Buffer>
double propagate(const Network& net, double x, Buffer& a, Buffer& b) {
  a[0] = x;
  for (const auto& layer : net.layers()) {
    for (std::size_t j = 0; j < layer.outputs; ++j) {
      double sum = layer.biases[j];
      for (std::size_t i = 0; i < layer.inputs; ++i) sum += layer.weight(j, i) * a[i];
      b[j] = std::tanh(sum);
    }
    std::swap(a, b);
  }
  return a[0];
}

}  // namespace detail

/// Output of a single-input, single-output network at x.
inline double forward(const Network& net, double x) {
  if (!std::isfinite(x)) throw InvalidInput("forward: input is not finite");
  net.validate();
  const auto sizes = net.layer_sizes();
  if (sizes.front() != 1) throw InvalidInput("forward: input layer must have one neuron");
  if (sizes.back() != 1) throw InvalidInput("forward: output layer must have one neuron");

  constexpr std::size_t kStackWidth = 32;
  const std::size_t width = *std::max_element(sizes.begin(), sizes.end());
  if (width <= kStackWidth) {
    std::array<double, kStackWidth> a{};
    std::array<double, kStackWidth> b{};
    return detail::propagate(net, x, a, b);
  }
  std::vector<double> a(width);
  std::vector<double> b(width);
  return detail::propagate(net, x, a, b);
}

/// sqrt(mean((forward(net, x) - y)^2)) over the training set.
inline double rms_error(const Network& net, const TrainingSet& data) {
  data.validate();
  double sum = 0.0;
  for (const auto& p : data.points()) {
    const double r = forward(net, p.x) - p.y;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(data.size()));
}

/// Every parameter drawn as min + (max - min) * next_unit(), one draw per
/// parameter in canonical order.
template <UniformSource Rng>
Network init_random(std::vector<std::size_t> sizes, const WeightBounds& bounds, Rng& rng) {
  bounds.validate();
  Network net(std::move(sizes));
  net.for_each_parameter([&](double& v) { v = bounds.min + bounds.width() * rng.next_unit(); });
  return net;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

inline bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace detail

/// Text form: "layers 1 4 1" header, then one parameter per line in
/// canonical order, 17 significant digits.
inline std::string serialize(const Network& net) {
  std::string out = "layers";
  for (auto s : net.layer_sizes()) out += " " + std::to_string(s);
  out += '\n';
  net.for_each_parameter([&](double v) {
    out += detail::format_double(v);
    out += '\n';
  });
  return out;
}

inline Network deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(line_no, "missing header");
  std::istringstream header(line);
  std::string tag;
  header >> tag;
  if (tag != "layers") throw ParseError(line_no, "expected 'layers' header");
  std::vector<std::size_t> sizes;
  long long s = 0;
  while (header >> s) {
    if (s <= 0) throw ParseError(line_no, "layer sizes must be positive");
    sizes.push_back(static_cast<std::size_t>(s));
  }
  if (!header.eof()) throw ParseError(line_no, "malformed layer size");
  if (sizes.size() < 2) throw ParseError(line_no, "need at least two layers");

  Network net(std::move(sizes));
  const std::size_t expected = net.parameter_count();
  for (std::size_t k = 0; k < expected; ++k) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError(line_no, "too few parameters");
    double v = 0.0;
    if (!detail::parse_double(line, v) || !std::isfinite(v)) {
      throw ParseError(line_no, "bad parameter value '" + line + "'");
    }
    net.parameter(k) = v;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError(line_no, "unexpected trailing content");
    }
  }
  return net;
}

}  // namespace anneal_noise
