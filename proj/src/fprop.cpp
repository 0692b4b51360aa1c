#include "fadjoint/fprop.hpp"

#include <string>

namespace fadjoint {

namespace {

Vector with_bias(const Vector& v) {
  std::vector<double> entries(v.begin(), v.end());
  entries.push_back(1.0);
  return Vector(std::move(entries));
}

}  // namespace

FPropagation forward(const Network& net, const Vector& input) {
  const Architecture& arch = net.arch();
  if (input.dim() != arch.input_dim()) {
    throw DimensionError("layer 0: input has dim " + std::to_string(input.dim()) +
                         ", architecture expects " + std::to_string(arch.input_dim()));
  }
  const bool augmented = arch.bias_mode == BiasMode::augmented;
  const std::size_t depth = net.depth();

  FPropagation record;
  record.x0 = augmented ? with_bias(input) : input;
  record.ys.reserve(depth);
  record.xs.reserve(depth);
  for (std::size_t h = 1; h <= depth; ++h) {
    Vector y = matvec(net.weight(h), record.x(h - 1));
    Vector x = apply(arch.activation, y);
    record.ys.push_back(std::move(y));
    record.xs.push_back(augmented && h < depth ? with_bias(x) : std::move(x));
  }
  return record;
}

const Vector& output(const FPropagation& record) { return record.x(record.depth()); }

}  // namespace fadjoint
