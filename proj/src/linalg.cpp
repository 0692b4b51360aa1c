#include "fadjoint/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace fadjoint {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw DimensionError("matrix literal: ragged rows");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_row_major(std::size_t rows, std::size_t cols,
                              std::vector<double> entries) {
  if (entries.size() != rows * cols) {
    throw DimensionError("from_row_major: " + std::to_string(entries.size()) +
                         " entries for shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.entries_ = std::move(entries);
  return m;
}

Matrix Matrix::column(const Vector& v) {
  return from_row_major(v.dim(), 1, {v.begin(), v.end()});
}

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: shape " + shape_string(a) + " vs " + shape_string(b));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.dim()) {
    throw DimensionError("matvec: shape " + shape_string(a) + " vs vector of dim " +
                         std::to_string(x.dim()));
  }
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Vector hadamard(const Vector& u, const Vector& v) {
  if (u.dim() != v.dim()) {
    throw DimensionError("hadamard: dim " + std::to_string(u.dim()) + " vs " +
                         std::to_string(v.dim()));
  }
  Vector w(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) w[i] = u[i] * v[i];
  return w;
}

Matrix outer(const Vector& u, const Vector& v) {
  Matrix m(u.dim(), v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = 0; j < v.dim(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

void add_scaled(Matrix& target, const Matrix& m, double alpha) {
  if (target.rows() != m.rows() || target.cols() != m.cols()) {
    throw DimensionError("add_scaled: shape " + shape_string(target) + " vs " +
                         shape_string(m));
  }
  auto dst = target.data();
  auto src = m.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += alpha * src[i];
}

namespace {

double max_abs_span(std::span<const double> s) {
  double best = 0.0;
  for (double x : s) best = std::max(best, std::abs(x));
  return best;
}

double max_abs_diff_span(std::span<const double> a, std::span<const double> b) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

}  // namespace

double max_abs(const Vector& v) { return max_abs_span(v.data()); }
double max_abs(const Matrix& m) { return max_abs_span(m.data()); }

double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("max_abs_diff: dim " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
  return max_abs_diff_span(a.data(), b.data());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape " + shape_string(a) + " vs " + shape_string(b));
  }
  return max_abs_diff_span(a.data(), b.data());
}

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (double x : m.data()) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace fadjoint
