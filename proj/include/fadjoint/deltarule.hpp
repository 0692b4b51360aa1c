#pragma once

#include "fadjoint/fprop.hpp"
#include "fadjoint/network.hpp"

namespace fadjoint::deltarule {

/// Classical generalized delta rule, kept independent of the adjoint pass so it
/// can serve as an oracle for it.
///
///   delta^L = seed (.) sigma'(Y^L)
///   delta^h = (W^{h+1})^T delta^{h+1} (.) sigma'(Y^h)   (bias column skipped
///                                                       in augmented mode)
///   dJ/dW^h = delta^h (X^{h-1})^T
///
/// The textbook form writes the last line as delta^{h+1} (X^h)^T with deltas
/// numbered from the layer above; the indexing here is shifted down by one so
/// that delta^h lives on the same layer as Y^h.
GradientSet backprop(const Network& net, const FPropagation& record, const Vector& seed);

}  // namespace fadjoint::deltarule
