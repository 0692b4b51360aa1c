#include "fadjoint/fsym.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fadjoint/fadjoint.hpp"
#include "fadjoint/fprop.hpp"

namespace fadjoint {

namespace {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = dist(rng);
  return m;
}

Vector gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace

Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw std::invalid_argument("random_orthogonal: n must be at least 1");
  Matrix r = gaussian_matrix(n, n, rng);
  Matrix q = Matrix::identity(n);

  // Householder reflections H_k = I - 2 v v^T / (v^T v), accumulated as Q = H_0 H_1 ... H_{n-2}.
  std::vector<double> v(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += r(i, k) * r(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = r(k, k) > 0.0 ? -norm : norm;
    std::fill(v.begin(), v.end(), 0.0);
    v[k] = r(k, k) - alpha;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = r(i, k);
    double vv = 0.0;
    for (std::size_t i = k; i < n; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;

    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * r(i, j);
      const double scale = 2.0 * dot / vv;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= scale * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = k; j < n; ++j) dot += q(i, j) * v[j];
      const double scale = 2.0 * dot / vv;
      for (std::size_t j = k; j < n; ++j) q(i, j) -= scale * v[j];
    }
  }

  // Q R = (Q D)(D R) with D = diag(sign R_kk) makes the factorization unique.
  for (std::size_t k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) q(i, k) = -q(i, k);
    }
  }
  return q;
}

Matrix random_orthogonal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_orthogonal(n, rng);
}

double orthogonality_defect(const Matrix& q) {
  if (q.rows() != q.cols()) {
    throw DimensionError("orthogonality_defect: matrix " + shape_string(q) + " is not square");
  }
  const Matrix identity = Matrix::identity(q.rows());
  const Matrix qt = transpose(q);
  return std::max(max_abs_diff(matmul(qt, q), identity), max_abs_diff(matmul(q, qt), identity));
}

bool is_orthogonal(const Matrix& q, double tol) {
  return q.rows() == q.cols() && orthogonality_defect(q) <= tol;
}

SymmetryDeviation fsymmetry_deviation(const Network& net, const Vector& input) {
  const FPropagation record = forward(net, input);
  const FAdjoint adjoint = fadjoint_pass(net, record, output(record));
  SymmetryDeviation dev;
  for (std::size_t h = 0; h <= net.depth(); ++h) {
    dev.max_dev_x = std::max(dev.max_dev_x, max_abs_diff(adjoint.xstar(h), record.x(h)));
    if (h > 0) dev.max_dev_y = std::max(dev.max_dev_y, max_abs_diff(adjoint.ystar(h), record.y(h)));
  }
  return dev;
}

SymmetryDeviation check_fsymmetry(const Network& net, const Vector& input) {
  if (net.bias_mode() != BiasMode::plain) {
    throw PreconditionError("F-symmetry check requires plain bias mode");
  }
  if (net.activation() != ActivationKind::identity) {
    throw PreconditionError("F-symmetry check requires identity activation, got " +
                            std::string(to_string(net.activation())));
  }
  const std::size_t width = net.arch().input_dim();
  for (std::size_t h = 1; h <= net.depth(); ++h) {
    const Matrix& w = net.weight(h);
    if (w.rows() != width || w.cols() != width) {
      throw PreconditionError("layer " + std::to_string(h) + ": weight " + shape_string(w) +
                              " is not " + std::to_string(width) + "x" + std::to_string(width));
    }
    if (!is_orthogonal(w)) {
      throw PreconditionError("layer " + std::to_string(h) + ": weight is not orthogonal (defect " +
                              std::to_string(orthogonality_defect(w)) + ")");
    }
  }
  return fsymmetry_deviation(net, input);
}

Network orthogonal_network(std::size_t n, std::size_t depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Architecture arch{std::vector<std::size_t>(depth + 1, n), BiasMode::plain,
                    ActivationKind::identity};
  std::vector<Matrix> weights;
  for (std::size_t h = 0; h < depth; ++h) weights.push_back(random_orthogonal(n, rng));
  return Network(std::move(arch), std::move(weights));
}

std::vector<SweepRow> sweep_nonorthogonality(std::size_t n, std::size_t depth,
                                             const std::vector<double>& grid,
                                             std::uint64_t seed) {
  if (n == 0 || depth == 0) throw std::invalid_argument("sweep: width and depth must be >= 1");
  for (double eps : grid) {
    if (!(eps >= 0.0)) throw std::invalid_argument("sweep: epsilon values must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::vector<Matrix> base;
  std::vector<Matrix> noise;
  for (std::size_t h = 0; h < depth; ++h) base.push_back(random_orthogonal(n, rng));
  for (std::size_t h = 0; h < depth; ++h) noise.push_back(gaussian_matrix(n, n, rng));
  const Vector input = gaussian_vector(n, rng);
  const Architecture arch{std::vector<std::size_t>(depth + 1, n), BiasMode::plain,
                          ActivationKind::identity};

  std::vector<SweepRow> rows;
  for (double eps : grid) {
    std::vector<Matrix> weights = base;
    if (eps > 0.0) {
      for (std::size_t h = 0; h < depth; ++h) add_scaled(weights[h], noise[h], eps);
    }
    const SymmetryDeviation dev = fsymmetry_deviation(Network(arch, std::move(weights)), input);
    rows.push_back({eps, dev.max_dev_x, dev.max_dev_y});
  }
  return rows;
}

}  // namespace fadjoint
