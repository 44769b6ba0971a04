#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace icae::numkit {

using Vec = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double v) { data_.assign(data_.size(), v); }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = M x
Vec matvec(const Matrix& m, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);

// LU factorization with partial pivoting of a square matrix.
class LuFactorization {
 public:
  // Throws NumericError if the matrix is not square.
  explicit LuFactorization(const Matrix& m);

  // Smallest pivot magnitude; zero or near-zero means singular.
  double min_pivot() const { return min_pivot_; }
  bool invertible(double pivot_tol) const { return min_pivot_ > pivot_tol; }

  // Solves M x = rhs. Throws NumericError when a pivot is exactly zero.
  Vec solve(std::span<const double> rhs) const;

 private:
  std::size_t n_ = 0;
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double min_pivot_ = 0.0;
};

}  // namespace icae::numkit
