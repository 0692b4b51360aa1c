#include "fadjoint/deltarule.hpp"

#include <string>

#include "fadjoint/activation.hpp"

namespace fadjoint::deltarule {

GradientSet backprop(const Network& net, const FPropagation& record, const Vector& seed) {
  const std::size_t depth = net.depth();
  const ActivationKind kind = net.activation();
  if (record.depth() != depth) {
    throw DimensionError("forward record has depth " + std::to_string(record.depth()) +
                         ", network has depth " + std::to_string(depth));
  }
  if (seed.dim() != record.y(depth).dim()) {
    throw DimensionError("seed has dim " + std::to_string(seed.dim()) + ", output layer has " +
                         std::to_string(record.y(depth).dim()) + " units");
  }

  GradientSet grads = GradientSet::zeros_like(net);
  std::vector<double> delta(seed.dim());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    delta[i] = seed[i] * activate_derivative(kind, record.y(depth)[i]);
  }

  for (std::size_t h = depth; h >= 1; --h) {
    const Vector& prev = record.x(h - 1);
    const Matrix& w = net.weight(h);
    if (w.rows() != delta.size() || w.cols() != prev.dim()) {
      throw DimensionError("layer " + std::to_string(h) + ": weight shape " + shape_string(w) +
                           " does not match the forward record");
    }
    Matrix& g = grads.layer(h);
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < w.cols(); ++j) g(i, j) = delta[i] * prev[j];

    if (h == 1) break;
    // Only the genuine units of layer h-1 receive error; the bias column of W^h
    // feeds from a constant.
    const Vector& below = record.y(h - 1);
    std::vector<double> next(below.dim(), 0.0);
    for (std::size_t j = 0; j < below.dim(); ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < w.rows(); ++i) acc += w(i, j) * delta[i];
      next[j] = acc * activate_derivative(kind, below[j]);
    }
    delta = std::move(next);
  }
  return grads;
}

}  // namespace fadjoint::deltarule
