#include "icae/numkit/matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "icae/errors.hpp"

namespace icae::numkit {

Vec matvec(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) {
    throw ShapeError("matvec: vector length " + std::to_string(x.size()) +
                     " does not match matrix cols " + std::to_string(m.cols()));
  }
  Vec y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) y[r] = dot(m.row(r), x);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

LuFactorization::LuFactorization(const Matrix& m) : n_(m.rows()), lu_(m), perm_(m.rows()) {
  if (m.rows() != m.cols()) throw NumericError("LU: matrix is not square");
  for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;

  min_pivot_ = n_ == 0 ? 0.0 : std::abs(lu_(0, 0));
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t best = k;
    double best_abs = std::abs(lu_(k, k));
    for (std::size_t r = k + 1; r < n_; ++r) {
      const double v = std::abs(lu_(r, k));
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (best != k) {
      for (std::size_t c = 0; c < n_; ++c) std::swap(lu_(k, c), lu_(best, c));
      std::swap(perm_[k], perm_[best]);
    }
    if (best_abs < min_pivot_ || k == 0) min_pivot_ = best_abs;
    if (best_abs == 0.0) continue;  // singular; eliminations below would divide by zero
    for (std::size_t r = k + 1; r < n_; ++r) {
      const double factor = lu_(r, k) / lu_(k, k);
      lu_(r, k) = factor;
      for (std::size_t c = k + 1; c < n_; ++c) lu_(r, c) -= factor * lu_(k, c);
    }
  }
}

Vec LuFactorization::solve(std::span<const double> rhs) const {
  if (rhs.size() != n_) throw ShapeError("LU solve: rhs length mismatch");
  if (min_pivot_ == 0.0) throw NumericError("LU solve: singular matrix");
  Vec y(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = rhs[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
    y[i] = s;
  }
  Vec x(n_);
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n_; ++j) s -= lu_(ii, j) * x[j];
    x[ii] = s / lu_(ii, ii);
  }
  return x;
}

}  // namespace icae::numkit
