// Architecture, weights, bias convention and model-file I/O.
//
// Layers are numbered h = 1..L as in the usual layered notation; weight h maps
// X^{h-1} to Y^h. In augmented mode a constant 1 is appended to X^0..X^{L-1},
// so W^h has one extra column holding the biases. X^L is never augmented.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fadjoint/activation.hpp"
#include "fadjoint/linalg.hpp"

namespace fadjoint {

enum class BiasMode { plain, augmented };

std::string_view to_string(BiasMode mode);
BiasMode parse_bias_mode(std::string_view name);

/// Raised when weights do not match the architecture they are paired with.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the text readers (model file, CSV); carries the 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;
  friend bool operator==(const Shape&, const Shape&) = default;
};

struct Architecture {
  /// Genuine unit counts G_0..G_L.
  std::vector<std::size_t> layer_sizes;
  BiasMode bias_mode = BiasMode::augmented;
  ActivationKind activation = ActivationKind::identity;

  std::size_t depth() const { return layer_sizes.empty() ? 0 : layer_sizes.size() - 1; }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  /// Expected shape of W^h, 1 <= h <= depth().
  Shape weight_shape(std::size_t h) const;
  /// Dimension of the stored X^h, bias coordinate included.
  std::size_t activation_dim(std::size_t h) const;

  /// Throws ShapeError unless L >= 1 and every G_h >= 1.
  void validate() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Parses "G0-G1-...-GL" into layer sizes. Throws std::invalid_argument.
std::vector<std::size_t> parse_layer_sizes(std::string_view text);
std::string format_layer_sizes(const std::vector<std::size_t>& sizes);

class Network {
 public:
  /// Validates every weight shape; throws ShapeError naming the layer.
  Network(Architecture arch, std::vector<Matrix> weights);

  const Architecture& arch() const { return arch_; }
  std::size_t depth() const { return arch_.depth(); }
  ActivationKind activation() const { return arch_.activation; }
  BiasMode bias_mode() const { return arch_.bias_mode; }

  /// W^h, 1-based.
  const Matrix& weight(std::size_t h) const { return weights_.at(h - 1); }
  const std::vector<Matrix>& weights() const { return weights_; }

  /// Single entry of W^h; shape cannot change through this accessor.
  double& entry(std::size_t h, std::size_t i, std::size_t j) { return weights_.at(h - 1)(i, j); }
  double entry(std::size_t h, std::size_t i, std::size_t j) const {
    return weights_.at(h - 1)(i, j);
  }

  friend bool operator==(const Network&, const Network&) = default;

 private:
  Architecture arch_;
  std::vector<Matrix> weights_;
};

/// Per-layer dJ/dW^h, shape-congruent with the weights.
struct GradientSet {
  std::vector<Matrix> layers;

  std::size_t depth() const { return layers.size(); }
  const Matrix& layer(std::size_t h) const { return layers.at(h - 1); }
  Matrix& layer(std::size_t h) { return layers.at(h - 1); }

  static GradientSet zeros_like(const Network& net);
  bool congruent_with(const Network& net) const;
  bool congruent_with(const GradientSet& other) const;
  friend bool operator==(const GradientSet&, const GradientSet&) = default;
};

/// W^h <- W^h - lr * grads^h.
void descend(Network& net, const GradientSet& grads, double lr);

struct InitScheme {
  enum class Kind { uniform, xavier, zeros };
  Kind kind = Kind::xavier;
  double radius = 0.0;  // uniform only

  static InitScheme uniform(double r) { return {Kind::uniform, r}; }
  static InitScheme xavier() { return {Kind::xavier, 0.0}; }
  static InitScheme zeros() { return {Kind::zeros, 0.0}; }
};

/// "zeros", "xavier", "uniform:<r>".
InitScheme parse_init_scheme(std::string_view text);

/// Deterministic in `seed`. xavier draws U(-b, b), b = sqrt(6 / (fan_in + fan_out))
/// with fan_in the column count of W^h and fan_out its row count.
Network init(const Architecture& arch, const InitScheme& scheme, std::uint64_t seed);

/// W with its last column removed. Throws DimensionError if W has one column.
Matrix sharp(const Matrix& w);

void save_model(const Network& net, std::ostream& out);
/// Throws ParseError with the offending line number.
Network load_model(std::istream& in);

}  // namespace fadjoint
