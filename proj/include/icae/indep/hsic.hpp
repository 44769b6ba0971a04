#pragma once

#include <cstdint>
#include <string>

#include "icae/numkit/matrix.hpp"

namespace icae::indep {

using numkit::Matrix;
using numkit::Vec;

enum class KernelType : std::uint8_t { kRbf = 0, kDelta = 1 };

struct Kernel {
  KernelType type = KernelType::kRbf;
  // RBF bandwidth sigma; 0 selects the median heuristic. Ignored by delta.
  double bandwidth = 0.0;

  static Kernel rbf(double bandwidth = 0.0) { return {KernelType::kRbf, bandwidth}; }
  static Kernel delta() { return {KernelType::kDelta, 0.0}; }

  std::string describe() const;
};

// Samples are rows of a matrix; categorical variables are single-column
// matrices holding the label value.
Matrix samples_from_labels(std::span<const std::uint32_t> labels);

// Median of pairwise Euclidean distances, computed over a strided subsample
// capped at 2000 rows. Throws NumericError when the median is zero.
double median_heuristic_bandwidth(const Matrix& samples);

// RBF: exp(-||a_i - a_j||^2 / (2 sigma^2)); delta: 1 if rows equal else 0.
Matrix gram_matrix(const Matrix& samples, const Kernel& kernel);

// Biased estimator (n-1)^{-2} tr(K_a H K_b H) with H = I - (1/n) 1 1^T.
double hsic(const Matrix& samples_a, const Matrix& samples_b, const Kernel& kernel_a,
            const Kernel& kernel_b);

struct HsicTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t n_perm = 0;
  std::uint64_t seed = 0;
  std::string kernel_a, kernel_b;
};

// Permutation test: samples_b is permuted n_perm times with the seeded
// generator; p = (1 + #{permuted >= observed}) / (n_perm + 1).
HsicTestResult hsic_permutation_test(const Matrix& samples_a, const Matrix& samples_b,
                                     const Kernel& kernel_a, const Kernel& kernel_b,
                                     std::size_t n_perm, std::uint64_t seed);

}  // namespace icae::indep
