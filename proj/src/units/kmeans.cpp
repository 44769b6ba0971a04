#include "icae/units/kmeans.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "icae/errors.hpp"
#include "icae/numkit/rng.hpp"

namespace icae::units {

using numkit::Rng;
using numkit::Vec;

namespace {

Matrix plus_plus_seeding(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  Matrix centroids(k, points.cols());
  std::vector<double> dist_sq(n, std::numeric_limits<double>::infinity());

  std::size_t first = static_cast<std::size_t>(rng.next_below(n));
  auto copy_point = [&](std::size_t centroid, std::size_t point) {
    for (std::size_t c = 0; c < points.cols(); ++c) centroids(centroid, c) = points(point, c);
  };
  copy_point(0, first);
  for (std::size_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = numkit::squared_distance(points.row(i), centroids.row(j - 1));
      if (d < dist_sq[i]) dist_sq[i] = d;
      total += dist_sq[i];
    }
    std::size_t chosen;
    if (total <= 0.0) {
      chosen = static_cast<std::size_t>(rng.next_below(n));  // all points coincide
    } else {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist_sq[i];
        if (u < acc) {
          chosen = i;
          break;
        }
      }
    }
    copy_point(j, chosen);
  }
  return centroids;
}

}  // namespace

std::uint32_t kmeans_assign_one(const Matrix& centroids, std::span<const double> point) {
  if (point.size() != centroids.cols()) throw ShapeError("kmeans_assign: dimension mismatch");
  std::uint32_t best = 0;
  double best_d = numkit::squared_distance(centroids.row(0), point);
  for (std::size_t j = 1; j < centroids.rows(); ++j) {
    const double d = numkit::squared_distance(centroids.row(j), point);
    if (d < best_d) {  // strict: ties keep the lowest index
      best_d = d;
      best = static_cast<std::uint32_t>(j);
    }
  }
  return best;
}

std::vector<std::uint32_t> kmeans_assign(const Matrix& centroids, const Matrix& points) {
  if (points.cols() != centroids.cols()) throw ShapeError("kmeans_assign: dimension mismatch");
  std::vector<std::uint32_t> labels(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    labels[i] = kmeans_assign_one(centroids, points.row(i));
  }
  return labels;
}

double kmeans_inertia(const Matrix& centroids, const Matrix& points) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.rows(); ++j) {
      best = std::min(best, numkit::squared_distance(centroids.row(j), points.row(i)));
    }
    total += best;
  }
  return total;
}

KmeansResult kmeans_fit(const Matrix& points, std::size_t k, std::uint64_t seed,
                        std::size_t max_iters, double tol) {
  if (k == 0) throw ConfigError("kmeans_fit: k must be positive");
  if (points.rows() < k) {
    throw ConfigError("kmeans_fit: need at least k = " + std::to_string(k) + " points, got " +
                      std::to_string(points.rows()));
  }
  Rng rng(seed);
  KmeansResult result;
  result.centroids = plus_plus_seeding(points, k, rng);

  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  std::vector<std::uint32_t> labels(n);
  Matrix sums(k, d);
  std::vector<std::size_t> counts(k);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = kmeans_assign_one(result.centroids, points.row(i));
      inertia += numkit::squared_distance(result.centroids.row(labels[i]), points.row(i));
    }
    result.inertia_trace.push_back(inertia);
    ++result.iterations;

    sums.fill(0.0);
    counts.assign(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t lbl = labels[i];
      ++counts[lbl];
      for (std::size_t c = 0; c < d; ++c) sums(lbl, c) += points(i, c);
    }
    // Empty clusters grab the point farthest from its assigned centroid.
    // Points that are the sole member of their cluster stay put.
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] > 0) continue;
      double worst = -1.0;
      std::size_t worst_i = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[labels[i]] <= 1) continue;
        const double dd = numkit::squared_distance(result.centroids.row(labels[i]), points.row(i));
        if (dd > worst) {
          worst = dd;
          worst_i = i;
        }
      }
      if (worst < 0.0) continue;  // n == k with duplicates; leave the cluster empty
      const std::uint32_t old = labels[worst_i];
      counts[old] -= 1;
      for (std::size_t c = 0; c < d; ++c) sums(old, c) -= points(worst_i, c);
      labels[worst_i] = static_cast<std::uint32_t>(j);
      counts[j] = 1;
      for (std::size_t c = 0; c < d; ++c) sums(j, c) = points(worst_i, c);
    }

    double shift_sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;  // unfillable empty cluster keeps its centroid
      for (std::size_t c = 0; c < d; ++c) {
        const double updated = sums(j, c) / static_cast<double>(counts[j]);
        const double delta = updated - result.centroids(j, c);
        shift_sq += delta * delta;
        result.centroids(j, c) = updated;
      }
    }
    if (std::sqrt(shift_sq) < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace icae::units
