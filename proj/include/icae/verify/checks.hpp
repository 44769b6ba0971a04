#pragma once

#include <cstdint>
#include <vector>

#include "icae/genproc/dataset.hpp"
#include "icae/model.hpp"

namespace icae::verify {

using genproc::FrameDataset;
using genproc::GenerativeSpec;
using genproc::ParallelPair;

struct ReconstructionReport {
  double epsilon = 0.0;     // max residual 2-norm
  double epsilon_sq = 0.0;  // max squared residual norm
  Vec residual_norms;       // per-record 2-norms
};

ReconstructionReport measure_reconstruction(const ConversionModel& model,
                                            const std::vector<Vec>& xs,
                                            const std::vector<Vec>& cs);
ReconstructionReport measure_reconstruction(const ConversionModel& model, const FrameDataset& ds);

// Max over pairs of the squared distance between the two encodings.
double measure_latent_discrepancy(const ConversionModel& model,
                                  const std::vector<ParallelPair>& pairs);

// A latent pair evaluated under one condition vector.
struct LatentPair {
  Vec a, b;
  Vec cond;
};

// Max of ||d(a, c) - d(b, c)||^2 / ||a - b||^2 over seeded sampled pairs per
// condition plus every required pair. Sampled pairs below denom_floor are
// skipped; required pairs are skipped only when the denominator is exactly
// zero (then both decodes coincide bitwise and the ratio carries no
// information). Throws EstimationError if no pair contributes.
double estimate_lipschitz(const ConversionModel& model, const std::vector<Vec>& latent_samples,
                          const std::vector<Vec>& conditions, std::size_t n_pairs,
                          std::uint64_t seed, double denom_floor = 1e-10,
                          const std::vector<LatentPair>& required_pairs = {});

struct ErrorBoundReport {
  double epsilon = 0.0;        // max target-side residual 2-norm
  double epsilon_sq = 0.0;     // max squared target-side residual
  double epsilon_prime = 0.0;  // max squared latent discrepancy
  double lipschitz_hat = 0.0;  // squared-norm ratio convention
  Vec conv_errors;             // per-pair squared conversion errors
  double bound = 0.0;          // 2 (lipschitz_hat * epsilon_prime + epsilon^2)
  double holds_fraction = 0.0;
  double conv_error_median = 0.0;
  double recon_sq_median = 0.0;     // median squared target-side residual
  double baseline_median = 0.0;     // median ||x_src - x_tgt||^2 (zero-effort)
  double recon_rmse = 0.0;          // per-entry RMSE over the target side
  std::size_t pair_count = 0;
};

// Composes the three measurements with epsilon taken on the target side and
// the Lipschitz pair set covering the evaluation encodings, so the bound
// chain is pointwise valid on every pair it is checked against.
ErrorBoundReport check_error_bound(const ConversionModel& model,
                                   const std::vector<ParallelPair>& pairs, std::uint64_t seed,
                                   std::size_t lipschitz_pairs = 200, double denom_floor = 1e-10);

struct InjectivityReport {
  double min_margin = 0.0;  // smallest pairwise latent distance across categories
  double margin_tol = 0.0;
  bool pass = false;
};

// Encodes f(s, ref_cond) for every content category; distinct categories
// must land at distinct latents.
InjectivityReport check_injectivity(const ConversionModel& model, const GenerativeSpec& spec,
                                    std::size_t ref_cond, double margin_tol = 1e-6);

struct TConsistencyReport {
  std::vector<std::vector<Vec>> latent_table;  // [s][c] -> encoder output
  Vec cross_cond_spread;                       // per-s max pairwise distance across conditions
  Vec inter_s_gap;                             // per-s distance to the nearest other category
  double median_spread = 0.0;
  double median_gap = 0.0;
  double spread_ratio = 0.0;  // median spread / median gap
};

TConsistencyReport check_t_consistency(const ConversionModel& model, const GenerativeSpec& spec);

// Mean silhouette of latent points grouped by label, Euclidean distances.
double silhouette_score(const std::vector<Vec>& points, std::span<const std::uint32_t> labels);

}  // namespace icae::verify
