// Test-only helpers: closed-form oracles for the two smallest networks and
// seeded generators for randomized configurations. Nothing here calls into the
// adjoint or delta-rule code paths.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fadjoint/linalg.hpp"
#include "fadjoint/network.hpp"

namespace fadjoint::testkit {

/// Scalar activation written out independently of the library's.
struct ScalarActivation {
  ActivationKind kind;

  double value(double y) const {
    switch (kind) {
      case ActivationKind::identity: return y;
      case ActivationKind::sigmoid: return 1.0 / (1.0 + std::exp(-y));
      case ActivationKind::tanh: return std::tanh(y);
      case ActivationKind::relu: return y > 0 ? y : 0.0;
    }
    return y;
  }
  double slope(double y) const {
    switch (kind) {
      case ActivationKind::identity: return 1.0;
      case ActivationKind::sigmoid: {
        const double s = value(y);
        return s * (1.0 - s);
      }
      case ActivationKind::tanh: return 1.0 / (std::cosh(y) * std::cosh(y));
      case ActivationKind::relu: return y > 0 ? 1.0 : 0.0;
    }
    return 1.0;
  }
};

/// Closed forms for A[1,1,1], augmented, elementary cost J = X^2 - y, with
/// W^1 = (a11 a12) and W^2 = (b1 b2).
struct ClosedFormA111 {
  double x0, y1, x1, y2, x2;          // scalar forward values (x0 = x, x1 = sigma(y1))
  double y2s, x1s, y1s, x0s;          // adjoint values
  double dw1[2], dw2[2];

  static ClosedFormA111 eval(ScalarActivation s, double a11, double a12, double b1, double b2,
                             double x) {
    ClosedFormA111 c{};
    c.x0 = x;
    c.y1 = a11 * x + a12;
    c.x1 = s.value(c.y1);
    c.y2 = b1 * c.x1 + b2;
    c.x2 = s.value(c.y2);
    c.y2s = s.slope(c.y2);
    c.x1s = b1 * s.slope(c.y2);
    c.y1s = b1 * s.slope(c.y2) * s.slope(c.y1);
    c.x0s = a11 * b1 * s.slope(c.y2) * s.slope(c.y1);
    c.dw2[0] = s.slope(c.y2) * s.value(c.y1);
    c.dw2[1] = s.slope(c.y2);
    c.dw1[0] = s.slope(c.y2) * s.slope(c.y1) * b1 * x;
    c.dw1[1] = s.slope(c.y2) * s.slope(c.y1) * b1;
    return c;
  }
};

/// Closed forms for A[1,2,1], augmented, elementary cost, with
/// W^1 = ((a11 a12) (a21 a22)) and W^2 = (b1 b2 b3). The first-layer gradient
/// uses the chain-rule-consistent form dJ/dW^1_i = b_i sigma'(y2) sigma'(y1_i) (x, 1).
struct ClosedFormA121 {
  double y11, y21, y2, x2;
  double y2s, x1s[2], y1s[2], x0s;
  double dw1[2][2], dw2[3];

  static ClosedFormA121 eval(ScalarActivation s, const double (&a)[2][2], const double (&b)[3],
                             double x) {
    ClosedFormA121 c{};
    c.y11 = a[0][0] * x + a[0][1];
    c.y21 = a[1][0] * x + a[1][1];
    c.y2 = b[0] * s.value(c.y11) + b[1] * s.value(c.y21) + b[2];
    c.x2 = s.value(c.y2);
    const double d2 = s.slope(c.y2);
    c.y2s = d2;
    c.x1s[0] = b[0] * d2;
    c.x1s[1] = b[1] * d2;
    c.y1s[0] = b[0] * d2 * s.slope(c.y11);
    c.y1s[1] = b[1] * d2 * s.slope(c.y21);
    c.x0s = a[0][0] * b[0] * d2 * s.slope(c.y11) + a[1][0] * b[1] * d2 * s.slope(c.y21);
    c.dw2[0] = d2 * s.value(c.y11);
    c.dw2[1] = d2 * s.value(c.y21);
    c.dw2[2] = d2;
    c.dw1[0][0] = b[0] * x * s.slope(c.y11) * d2;
    c.dw1[0][1] = b[0] * s.slope(c.y11) * d2;
    c.dw1[1][0] = b[1] * x * s.slope(c.y21) * d2;
    c.dw1[1][1] = b[1] * s.slope(c.y21) * d2;
    return c;
  }
};

/// Randomized configuration used by the property sweeps.
struct RandomCase {
  Network net;
  Vector input;
  Vector target;
};

inline Vector random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = dist(rng);
  return m;
}

/// Depth in [1, max_depth], widths in [1, max_width], activation drawn from
/// `kinds`, bias mode alternating with the draw.
inline RandomCase random_case(std::mt19937_64& rng, const std::vector<ActivationKind>& kinds,
                              std::size_t max_depth = 5, std::size_t max_width = 8) {
  std::uniform_int_distribution<std::size_t> depth_dist(1, max_depth);
  std::uniform_int_distribution<std::size_t> width_dist(1, max_width);
  std::uniform_int_distribution<std::size_t> kind_dist(0, kinds.size() - 1);
  std::bernoulli_distribution coin(0.5);

  Architecture arch;
  const std::size_t depth = depth_dist(rng);
  for (std::size_t h = 0; h <= depth; ++h) arch.layer_sizes.push_back(width_dist(rng));
  arch.bias_mode = coin(rng) ? BiasMode::augmented : BiasMode::plain;
  arch.activation = kinds[kind_dist(rng)];

  std::vector<Matrix> weights;
  for (std::size_t h = 1; h <= depth; ++h) {
    const Shape s = arch.weight_shape(h);
    weights.push_back(random_matrix(s.rows, s.cols, rng));
  }
  Network net(arch, std::move(weights));
  Vector input = random_vector(arch.input_dim(), rng);
  Vector target = random_vector(arch.output_dim(), rng);
  return {std::move(net), std::move(input), std::move(target)};
}

/// Entrywise |a - b| <= rtol * max(|a|, |b|); exact equality always passes.
inline bool relatively_equal(double a, double b, double rtol) {
  if (a == b) return true;
  return std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b));
}

}  // namespace fadjoint::testkit
