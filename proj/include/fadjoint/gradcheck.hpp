#pragma once

#include <cstddef>
#include <string>

#include "fadjoint/fadjoint.hpp"
#include "fadjoint/network.hpp"

namespace fadjoint {

inline constexpr double kDefaultFdStep = 1e-5;
inline constexpr double kDefaultAtol = 1e-6;
inline constexpr double kDefaultRtol = 1e-5;

/// Central differences (J(W + s E_ij) - J(W - s E_ij)) / 2s for every weight
/// entry. Each perturbation is applied to a copy; `net` is never modified.
GradientSet numeric_gradient(const Network& net, const Vector& input, const Vector& target,
                             LossKind loss, double step = kDefaultFdStep);

struct GradientReport {
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  /// Entry with the largest |a-b| / (atol + rtol |b|), 1-based layer.
  std::size_t worst_layer = 0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  double atol = 0.0;
  double rtol = 0.0;
  bool pass = true;
};

/// Entrywise |a - b| <= atol + rtol |b|. Throws ShapeError on incongruent sets.
GradientReport compare(const GradientSet& a, const GradientSet& b, double atol, double rtol);

std::string describe(const GradientReport& report);

}  // namespace fadjoint
