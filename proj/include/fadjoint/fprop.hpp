#pragma once

#include <vector>

#include "fadjoint/linalg.hpp"
#include "fadjoint/network.hpp"

namespace fadjoint {

/// Forward record {X^0, Y^1, X^1, ..., Y^L, X^L}.
///
/// X^h is stored after augmentation, so in augmented mode X^0..X^{L-1} carry
/// a trailing constant 1.0 and the gradient's bias column falls out of the
/// outer product with X^{h-1}.
struct FPropagation {
  Vector x0;
  std::vector<Vector> ys;  // Y^1..Y^L
  std::vector<Vector> xs;  // X^1..X^L

  std::size_t depth() const { return ys.size(); }
  /// X^h for 0 <= h <= L.
  const Vector& x(std::size_t h) const { return h == 0 ? x0 : xs.at(h - 1); }
  /// Y^h for 1 <= h <= L.
  const Vector& y(std::size_t h) const { return ys.at(h - 1); }
};

/// Runs Y^h = W^h X^{h-1}, X^h = sigma(Y^h) for h = 1..L. `input` is the raw
/// G_0-dimensional sample; augmentation is applied here.
FPropagation forward(const Network& net, const Vector& input);

/// f(x) = X^L.
const Vector& output(const FPropagation& record);

}  // namespace fadjoint
