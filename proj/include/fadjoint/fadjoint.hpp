// The F-adjoint backward pass.
//
// Starting from a seed cotangent X^L_*, each layer applies two assignments:
//
//   Y^h_*     = X^h_* (.) sigma'(Y^h)
//   X^{h-1}_* = (W^h)^T Y^h_*            plain mode
//   X^{h-1}_* = (W^h_sharp)^T Y^h_*      augmented mode (bias column dropped)
//
// and the weight gradient is dJ/dW^h = Y^h_* (X^{h-1})^T with X^{h-1} taken
// from the forward record, bias coordinate included. Seeding with dJ/dX^L
// gives exactly the backpropagation gradients.

#pragma once

#include <string_view>
#include <vector>

#include "fadjoint/fprop.hpp"
#include "fadjoint/linalg.hpp"
#include "fadjoint/network.hpp"

namespace fadjoint {

/// Backward record {X^L_*, Y^L_*, X^{L-1}_*, ..., Y^1_*, X^0_*}.
struct FAdjoint {
  Vector xLstar;
  std::vector<Vector> ystars;  // Y^L_*..Y^1_*
  std::vector<Vector> xstars;  // X^{L-1}_*..X^0_*

  std::size_t depth() const { return ystars.size(); }
  /// X^h_* for 0 <= h <= L.
  const Vector& xstar(std::size_t h) const {
    return h == depth() ? xLstar : xstars.at(depth() - 1 - h);
  }
  /// Y^h_* for 1 <= h <= L.
  const Vector& ystar(std::size_t h) const { return ystars.at(depth() - h); }
};

/// Costs J(f(x), y).
///   elementary: J = sum_i (f_i - y_i), dJ/dX^L = 1
///   mse:        J = 1/2 |f - y|^2,     dJ/dX^L = f - y
/// elementary is unbounded below; use it for gradient demos, not training.
enum class LossKind { elementary, mse };

std::string_view to_string(LossKind kind);
LossKind parse_loss(std::string_view name);

double loss_value(LossKind kind, const Vector& output, const Vector& target);
/// dJ/dX^L, the seed of the adjoint pass.
Vector loss_seed(LossKind kind, const Vector& output, const Vector& target);

/// Throws DimensionError if the record was not produced by `net` or the seed
/// does not have dimension G_L.
FAdjoint fadjoint_pass(const Network& net, const FPropagation& record, const Vector& seed);

/// dJ/dW^h = Y^h_* (X^{h-1})^T for h = 1..L.
GradientSet weight_gradients(const FPropagation& record, const FAdjoint& adjoint);

struct GradientResult {
  GradientSet gradients;
  double loss = 0.0;
};

/// forward, seed from the loss, adjoint pass, weight gradients.
GradientResult gradient(const Network& net, const Vector& input, const Vector& target,
                        LossKind loss);

}  // namespace fadjoint
