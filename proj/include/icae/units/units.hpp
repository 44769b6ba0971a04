#pragma once

#include <cstdint>
#include <vector>

#include "icae/genproc/dataset.hpp"
#include "icae/units/kmeans.hpp"

namespace icae::units {

using genproc::FrameDataset;
using numkit::Vec;

// Cluster codebook fitted on one reference condition, with the label prior
// histogram p and the pairwise square-root L1 distance matrix D.
struct UnitModel {
  std::size_t k = 0;
  Matrix centroids;        // k x d_x
  std::uint32_t ref_cond = 0;
  Vec prior_hist;          // length k, sums to 1
  Matrix dist_matrix;      // D_ij = |p_i - p_j|^(1/2)

  void validate() const;
};

// D_ij = sqrt(|p_i - p_j|): symmetric, zero diagonal.
Matrix distance_matrix(const Vec& prior_hist);

enum class RefCondPolicy : std::uint8_t {
  kMostRecords = 0,  // condition with the most records; ties break low
  kLowestId = 1,
};

std::uint32_t choose_ref_cond(const FrameDataset& ds, RefCondPolicy policy);

// Fits centroids on the reference condition's records only, then assigns
// every record and fills proxy_s, the prior histogram, and D.
UnitModel build_proxy(FrameDataset& ds, std::size_t k, RefCondPolicy policy, std::uint64_t seed,
                      std::size_t max_iters = 100, double tol = 1e-6);

struct AsymmetryReport {
  double min_off_diagonal = 0.0;
  double max_diagonal = 0.0;
  std::size_t near_tie_count = 0;  // off-diagonal entries at or below the tolerance
  double gap_tol = 0.0;
  bool pass = false;
};

// Passes iff every off-diagonal entry of D exceeds gap_tol and the diagonal
// is exactly zero.
AsymmetryReport asymmetry_check(const UnitModel& model, double gap_tol);

}  // namespace icae::units
