#include "fadjoint/network.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace fadjoint {

std::string_view to_string(BiasMode mode) {
  return mode == BiasMode::plain ? "plain" : "augmented";
}

BiasMode parse_bias_mode(std::string_view name) {
  if (name == "plain") return BiasMode::plain;
  if (name == "augmented") return BiasMode::augmented;
  throw std::invalid_argument("unknown bias mode '" + std::string(name) +
                              "' (expected plain|augmented)");
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Shape Architecture::weight_shape(std::size_t h) const {
  const std::size_t extra = bias_mode == BiasMode::augmented ? 1 : 0;
  return {layer_sizes.at(h), layer_sizes.at(h - 1) + extra};
}

std::size_t Architecture::activation_dim(std::size_t h) const {
  const bool augmented = bias_mode == BiasMode::augmented && h < depth();
  return layer_sizes.at(h) + (augmented ? 1 : 0);
}

void Architecture::validate() const {
  if (layer_sizes.size() < 2) {
    throw ShapeError("architecture needs at least an input and an output layer");
  }
  for (std::size_t h = 0; h < layer_sizes.size(); ++h) {
    if (layer_sizes[h] == 0) {
      throw ShapeError("layer " + std::to_string(h) + " has zero units");
    }
  }
}

std::vector<std::size_t> parse_layer_sizes(std::string_view text) {
  std::vector<std::size_t> sizes;
  std::size_t start = 0;
  while (true) {
    const std::size_t dash = text.find('-', start);
    const std::string_view token =
        text.substr(start, dash == std::string_view::npos ? std::string_view::npos : dash - start);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw std::invalid_argument("malformed architecture '" + std::string(text) +
                                  "' (expected e.g. 2-3-1)");
    }
    if (value == 0) {
      throw std::invalid_argument("architecture '" + std::string(text) +
                                  "' has a layer with zero units");
    }
    sizes.push_back(value);
    if (dash == std::string_view::npos) break;
    start = dash + 1;
  }
  if (sizes.size() < 2) {
    throw std::invalid_argument("architecture '" + std::string(text) +
                                "' needs at least two layers");
  }
  return sizes;
}

std::string format_layer_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) out += '-';
    out += std::to_string(sizes[i]);
  }
  return out;
}

Network::Network(Architecture arch, std::vector<Matrix> weights)
    : arch_(std::move(arch)), weights_(std::move(weights)) {
  arch_.validate();
  if (weights_.size() != arch_.depth()) {
    throw ShapeError("expected " + std::to_string(arch_.depth()) + " weight matrices, got " +
                     std::to_string(weights_.size()));
  }
  for (std::size_t h = 1; h <= arch_.depth(); ++h) {
    const Shape want = arch_.weight_shape(h);
    const Matrix& w = weights_[h - 1];
    if (w.rows() != want.rows || w.cols() != want.cols) {
      throw ShapeError("layer " + std::to_string(h) + ": expected weight shape " +
                       std::to_string(want.rows) + "x" + std::to_string(want.cols) + ", got " +
                       shape_string(w));
    }
  }
}

GradientSet GradientSet::zeros_like(const Network& net) {
  GradientSet g;
  for (const Matrix& w : net.weights()) g.layers.emplace_back(w.rows(), w.cols());
  return g;
}

bool GradientSet::congruent_with(const Network& net) const {
  if (layers.size() != net.depth()) return false;
  for (std::size_t h = 1; h <= net.depth(); ++h) {
    if (layer(h).rows() != net.weight(h).rows() || layer(h).cols() != net.weight(h).cols())
      return false;
  }
  return true;
}

bool GradientSet::congruent_with(const GradientSet& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].rows() != other.layers[i].rows() || layers[i].cols() != other.layers[i].cols())
      return false;
  }
  return true;
}

void descend(Network& net, const GradientSet& grads, double lr) {
  if (!grads.congruent_with(net)) {
    throw ShapeError("gradient set is not congruent with the network");
  }
  for (std::size_t h = 1; h <= net.depth(); ++h) {
    const Matrix& g = grads.layer(h);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) net.entry(h, i, j) -= lr * g(i, j);
  }
}

InitScheme parse_init_scheme(std::string_view text) {
  if (text == "zeros") return InitScheme::zeros();
  if (text == "xavier") return InitScheme::xavier();
  constexpr std::string_view prefix = "uniform:";
  if (text.starts_with(prefix)) {
    const std::string rest(text.substr(prefix.size()));
    char* end = nullptr;
    const double r = std::strtod(rest.c_str(), &end);
    if (!rest.empty() && end == rest.c_str() + rest.size() && r > 0.0 && std::isfinite(r)) {
      return InitScheme::uniform(r);
    }
  }
  throw std::invalid_argument("unknown init scheme '" + std::string(text) +
                              "' (expected zeros|xavier|uniform:<r>)");
}

Network init(const Architecture& arch, const InitScheme& scheme, std::uint64_t seed) {
  arch.validate();
  if (scheme.kind == InitScheme::Kind::uniform && !(scheme.radius > 0.0)) {
    throw std::invalid_argument("uniform init needs a positive radius");
  }
  std::mt19937_64 rng(seed);
  std::vector<Matrix> weights;
  for (std::size_t h = 1; h <= arch.depth(); ++h) {
    const Shape shape = arch.weight_shape(h);
    Matrix w(shape.rows, shape.cols);
    double bound = 0.0;
    switch (scheme.kind) {
      case InitScheme::Kind::zeros: break;
      case InitScheme::Kind::uniform: bound = scheme.radius; break;
      case InitScheme::Kind::xavier:
        bound = std::sqrt(6.0 / static_cast<double>(shape.rows + shape.cols));
        break;
    }
    if (bound > 0.0) {
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (double& x : w.data()) x = dist(rng);
    }
    weights.push_back(std::move(w));
  }
  return Network(arch, std::move(weights));
}

Matrix sharp(const Matrix& w) {
  if (w.cols() < 2) {
    throw DimensionError("sharp: matrix " + shape_string(w) + " has no column to drop");
  }
  Matrix s(w.rows(), w.cols() - 1);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j + 1 < w.cols(); ++j) s(i, j) = w(i, j);
  return s;
}

// Model file ---------------------------------------------------------------

namespace {

constexpr std::string_view kModelHeader = "fadjoint-model v1";

std::string format_exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-blank line; throws at end of input.
  std::string next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    throw ParseError(line_no_ + 1, std::string("unexpected end of file, expected ") + expecting);
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  for (std::string t; ss >> t;) tokens.push_back(t);
  return tokens;
}

std::size_t parse_count(const std::string& token, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a non-negative integer, got '" + token + "'");
  }
  return value;
}

double parse_real(const std::string& token, std::size_t line) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(value)) {
    throw ParseError(line, "expected a finite number, got '" + token + "'");
  }
  return value;
}

}  // namespace

void save_model(const Network& net, std::ostream& out) {
  const Architecture& arch = net.arch();
  out << kModelHeader << '\n';
  out << "arch";
  for (std::size_t g : arch.layer_sizes) out << ' ' << g;
  out << '\n';
  out << "mode " << to_string(arch.bias_mode) << '\n';
  out << "activation " << to_string(arch.activation) << '\n';
  for (std::size_t h = 1; h <= net.depth(); ++h) {
    const Matrix& w = net.weight(h);
    out << "layer " << h << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) {
        if (j > 0) out << ' ';
        out << format_exact(w(i, j));
      }
      out << '\n';
    }
  }
}

Network load_model(std::istream& in) {
  LineReader reader(in);

  std::string line = reader.next("model header");
  if (line.find_last_not_of(" \t\r") != std::string::npos) {
    line.erase(line.find_last_not_of(" \t\r") + 1);
  }
  if (line != kModelHeader) {
    throw ParseError(reader.line(), "expected header '" + std::string(kModelHeader) + "'");
  }

  Architecture arch;
  auto tokens = split_ws(reader.next("arch line"));
  if (tokens.size() < 3 || tokens[0] != "arch") {
    throw ParseError(reader.line(), "expected 'arch G0 G1 ... GL' with at least two layers");
  }
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::size_t g = parse_count(tokens[i], reader.line());
    if (g == 0) throw ParseError(reader.line(), "layer sizes must be positive");
    arch.layer_sizes.push_back(g);
  }

  tokens = split_ws(reader.next("mode line"));
  if (tokens.size() != 2 || tokens[0] != "mode") {
    throw ParseError(reader.line(), "expected 'mode plain|augmented'");
  }
  try {
    arch.bias_mode = parse_bias_mode(tokens[1]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(reader.line(), e.what());
  }

  tokens = split_ws(reader.next("activation line"));
  if (tokens.size() != 2 || tokens[0] != "activation") {
    throw ParseError(reader.line(), "expected 'activation <name>'");
  }
  try {
    arch.activation = parse_activation(tokens[1]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(reader.line(), e.what());
  }

  std::vector<Matrix> weights;
  for (std::size_t h = 1; h <= arch.depth(); ++h) {
    tokens = split_ws(reader.next("layer header"));
    if (tokens.size() != 4 || tokens[0] != "layer") {
      throw ParseError(reader.line(), "expected 'layer h rows cols'");
    }
    const std::size_t index = parse_count(tokens[1], reader.line());
    const std::size_t rows = parse_count(tokens[2], reader.line());
    const std::size_t cols = parse_count(tokens[3], reader.line());
    const Shape want = arch.weight_shape(h);
    if (index != h) {
      throw ParseError(reader.line(), "expected layer " + std::to_string(h) + ", got " +
                                          std::to_string(index));
    }
    if (rows != want.rows || cols != want.cols) {
      throw ParseError(reader.line(), "layer " + std::to_string(h) + ": expected shape " +
                                          std::to_string(want.rows) + "x" +
                                          std::to_string(want.cols) + ", got " +
                                          std::to_string(rows) + "x" + std::to_string(cols));
    }
    std::vector<double> entries;
    entries.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
      tokens = split_ws(reader.next("weight row"));
      if (tokens.size() != cols) {
        throw ParseError(reader.line(), "expected " + std::to_string(cols) +
                                            " values in weight row, got " +
                                            std::to_string(tokens.size()));
      }
      for (const auto& t : tokens) entries.push_back(parse_real(t, reader.line()));
    }
    weights.push_back(Matrix::from_row_major(rows, cols, std::move(entries)));
  }
  return Network(std::move(arch), std::move(weights));
}

}  // namespace fadjoint
