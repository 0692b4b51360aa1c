// F-symmetry experiments.
//
// With identity activation, plain mode and orthogonal square weights, seeding
// the adjoint pass with X^L_* = X^L walks the forward record backwards:
// X^{h-1}_* = (W^h)^T W^h X^{h-1} = X^{h-1}. This module checks that equality
// numerically and measures how it degrades when the weights are perturbed.

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "fadjoint/linalg.hpp"
#include "fadjoint/network.hpp"

namespace fadjoint {

/// Raised when a network does not meet the F-symmetry preconditions.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kOrthogonalityTolerance = 1e-10;

/// Orthogonal factor of the Householder QR of a seeded Gaussian n×n matrix,
/// signs fixed so that R has a positive diagonal.
Matrix random_orthogonal(std::size_t n, std::uint64_t seed);
Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng);

/// max |Q^T Q - I| and max |Q Q^T - I|, whichever is larger. Square Q only.
double orthogonality_defect(const Matrix& q);
bool is_orthogonal(const Matrix& q, double tol = kOrthogonalityTolerance);

struct SymmetryDeviation {
  /// max over h = 0..L of |X^h_* - X^h|_max
  double max_dev_x = 0.0;
  /// max over h = 1..L of |Y^h_* - Y^h|_max
  double max_dev_y = 0.0;

  double max() const { return max_dev_x > max_dev_y ? max_dev_x : max_dev_y; }
};

/// Forward, then the adjoint pass seeded with X^L; no preconditions checked.
SymmetryDeviation fsymmetry_deviation(const Network& net, const Vector& input);

/// As fsymmetry_deviation, but first requires plain mode, identity activation
/// and square orthogonal weights of a single width. Throws PreconditionError.
SymmetryDeviation check_fsymmetry(const Network& net, const Vector& input);

/// Plain identity network of `depth` random orthogonal n×n layers.
Network orthogonal_network(std::size_t n, std::size_t depth, std::uint64_t seed);

struct SweepRow {
  double epsilon = 0.0;
  double max_dev_x = 0.0;
  double max_dev_y = 0.0;
};

/// For each epsilon, W^h = Q^h + epsilon G^h with seeded orthogonal Q^h and
/// Gaussian G^h. The same Q, G and input are reused for every epsilon.
std::vector<SweepRow> sweep_nonorthogonality(std::size_t n, std::size_t depth,
                                             const std::vector<double>& grid,
                                             std::uint64_t seed);

}  // namespace fadjoint
