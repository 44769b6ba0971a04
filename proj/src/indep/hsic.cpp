#include "icae/indep/hsic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icae/errors.hpp"
#include "icae/numkit/rng.hpp"

namespace icae::indep {

using numkit::Rng;

std::string Kernel::describe() const {
  if (type == KernelType::kDelta) return "delta";
  return "rbf(sigma=" + std::to_string(bandwidth) + ")";
}

Matrix samples_from_labels(std::span<const std::uint32_t> labels) {
  Matrix m(labels.size(), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) m(i, 0) = static_cast<double>(labels[i]);
  return m;
}

double median_heuristic_bandwidth(const Matrix& samples) {
  const std::size_t n = samples.rows();
  if (n < 2) throw ConfigError("median heuristic: need at least 2 samples");
  const std::size_t cap = 2000;
  const std::size_t stride = n <= cap ? 1 : (n + cap - 1) / cap;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < n; i += stride) rows.push_back(i);

  std::vector<double> dists;
  dists.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      dists.push_back(std::sqrt(numkit::squared_distance(samples.row(rows[i]), samples.row(rows[j]))));
    }
  }
  std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
  const double median = dists[dists.size() / 2];
  if (median <= 0.0) {
    throw NumericError("median heuristic: zero median distance, bandwidth undefined");
  }
  return median;
}

Matrix gram_matrix(const Matrix& samples, const Kernel& kernel) {
  const std::size_t n = samples.rows();
  if (n < 2) throw ConfigError("gram_matrix: need at least 2 samples");
  Matrix k(n, n);
  if (kernel.type == KernelType::kDelta) {
    for (std::size_t i = 0; i < n; ++i) {
      k(i, i) = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool equal = std::equal(samples.row(i).begin(), samples.row(i).end(),
                                      samples.row(j).begin());
        k(i, j) = k(j, i) = equal ? 1.0 : 0.0;
      }
    }
    return k;
  }
  const double sigma = kernel.bandwidth > 0.0 ? kernel.bandwidth
                                              : median_heuristic_bandwidth(samples);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = numkit::squared_distance(samples.row(i), samples.row(j));
      k(i, j) = k(j, i) = std::exp(-d2 * inv);
    }
  }
  return k;
}

namespace {

// H K H in place: subtract row means, column means, add the grand mean.
void center(Matrix& k) {
  const std::size_t n = k.rows();
  Vec row_mean(n, 0.0), col_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row_mean[i] += k(i, j);
      col_mean[j] += k(i, j);
      grand += k(i, j);
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : row_mean) v *= inv_n;
  for (double& v : col_mean) v *= inv_n;
  grand *= inv_n * inv_n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      k(i, j) += grand - row_mean[i] - col_mean[j];
    }
  }
}

// tr((H K_a H) K_b) with both matrices symmetric.
double centered_trace(const Matrix& centered_a, const Matrix& k_b) {
  double trace = 0.0;
  const std::size_t n = centered_a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    trace += numkit::dot(centered_a.row(i), k_b.row(i));
  }
  return trace;
}

double statistic_scale(std::size_t n) {
  const double m = static_cast<double>(n) - 1.0;
  return 1.0 / (m * m);
}

Kernel resolve(const Kernel& kernel, const Matrix& samples) {
  Kernel k = kernel;
  if (k.type == KernelType::kRbf && k.bandwidth <= 0.0) {
    k.bandwidth = median_heuristic_bandwidth(samples);
  }
  return k;
}

}  // namespace

double hsic(const Matrix& samples_a, const Matrix& samples_b, const Kernel& kernel_a,
            const Kernel& kernel_b) {
  if (samples_a.rows() != samples_b.rows()) throw ShapeError("hsic: sample counts differ");
  if (samples_a.rows() < 2) throw ConfigError("hsic: need at least 2 samples");
  Matrix k_a = gram_matrix(samples_a, resolve(kernel_a, samples_a));
  const Matrix k_b = gram_matrix(samples_b, resolve(kernel_b, samples_b));
  center(k_a);
  return statistic_scale(samples_a.rows()) * centered_trace(k_a, k_b);
}

HsicTestResult hsic_permutation_test(const Matrix& samples_a, const Matrix& samples_b,
                                     const Kernel& kernel_a, const Kernel& kernel_b,
                                     std::size_t n_perm, std::uint64_t seed) {
  if (n_perm < 99) throw ConfigError("hsic permutation test: n_perm must be >= 99");
  if (samples_a.rows() != samples_b.rows()) throw ShapeError("hsic: sample counts differ");
  const std::size_t n = samples_a.rows();

  const Kernel ka_resolved = resolve(kernel_a, samples_a);
  const Kernel kb_resolved = resolve(kernel_b, samples_b);
  Matrix k_a = gram_matrix(samples_a, ka_resolved);
  const Matrix k_b = gram_matrix(samples_b, kb_resolved);
  center(k_a);
  const double scale = statistic_scale(n);
  const double observed = scale * centered_trace(k_a, k_b);

  // Permuting samples_b by pi turns K_b into K_b[pi(i), pi(j)], so each
  // permuted statistic reuses the two precomputed matrices.
  Rng rng(seed);
  std::vector<std::size_t> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::size_t at_least = 0;
  for (std::size_t p = 0; p < n_perm; ++p) {
    rng.shuffle(pi);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto arow = k_a.row(i);
      const auto brow = k_b.row(pi[i]);
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += arow[j] * brow[pi[j]];
      trace += acc;
    }
    if (scale * trace >= observed) ++at_least;
  }

  HsicTestResult result;
  result.statistic = observed;
  result.p_value = static_cast<double>(1 + at_least) / static_cast<double>(n_perm + 1);
  result.n = n;
  result.n_perm = n_perm;
  result.seed = seed;
  result.kernel_a = ka_resolved.describe();
  result.kernel_b = kb_resolved.describe();
  return result;
}

}  // namespace icae::indep
