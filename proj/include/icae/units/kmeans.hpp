#pragma once

#include <cstdint>
#include <vector>

#include "icae/numkit/matrix.hpp"

namespace icae::units {

using numkit::Matrix;

struct KmeansResult {
  Matrix centroids;                  // k x d
  std::vector<double> inertia_trace; // within-cluster sum of squares per Lloyd iteration
  std::size_t iterations = 0;
  bool converged = false;            // centroid shift fell below tol
};

// k-means++ seeding followed by Lloyd iterations. Empty clusters are
// re-seeded to the point farthest from its assigned centroid.
KmeansResult kmeans_fit(const Matrix& points, std::size_t k, std::uint64_t seed,
                        std::size_t max_iters = 100, double tol = 1e-6);

// Nearest centroid by squared Euclidean distance; ties break to the lowest
// index.
std::vector<std::uint32_t> kmeans_assign(const Matrix& centroids, const Matrix& points);
std::uint32_t kmeans_assign_one(const Matrix& centroids, std::span<const double> point);

double kmeans_inertia(const Matrix& centroids, const Matrix& points);

}  // namespace icae::units
