// Dense real linear algebra kernels used by the forward and adjoint passes.
//
// Everything is 64-bit floating point with row-major logical indexing. The
// kernels are plain loops; the networks this library targets are desk-sized.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fadjoint {

/// Raised when operand shapes do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense column vector.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : entries_(dim, fill) {}
  Vector(std::initializer_list<double> values) : entries_(values) {}
  explicit Vector(std::vector<double> values) : entries_(std::move(values)) {}

  std::size_t dim() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double& operator[](std::size_t i) { return entries_[i]; }
  double operator[](std::size_t i) const { return entries_[i]; }

  std::span<double> data() { return entries_; }
  std::span<const double> data() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> entries_;
};

/// Dense matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}
  /// Nested-list literal; every row must have the same length.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Takes ownership of `entries` laid out row-major.
  static Matrix from_row_major(std::size_t rows, std::size_t cols,
                               std::vector<double> entries);
  /// n×1 matrix holding v.
  static Matrix column(const Vector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<double> data() { return entries_; }
  std::span<const double> data() const { return entries_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

std::string shape_string(const Matrix& m);

Matrix matmul(const Matrix& a, const Matrix& b);
/// Matrix-vector product, the vector taken as a column.
Vector matvec(const Matrix& a, const Vector& x);
Matrix transpose(const Matrix& a);
Vector hadamard(const Vector& u, const Vector& v);
/// u v^T.
Matrix outer(const Vector& u, const Vector& v);

/// target += alpha * m
void add_scaled(Matrix& target, const Matrix& m, double alpha);

double max_abs(const Vector& v);
double max_abs(const Matrix& m);
double max_abs_diff(const Vector& a, const Vector& b);
double max_abs_diff(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& m);

}  // namespace fadjoint
