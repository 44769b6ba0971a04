#include "icae/units/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "icae/errors.hpp"

namespace icae::units {

void UnitModel::validate() const {
  if (k == 0 || centroids.rows() != k) throw DataError("unit model: centroid count mismatch");
  if (prior_hist.size() != k) throw DataError("unit model: prior histogram length mismatch");
  double sum = 0.0;
  for (double p : prior_hist) {
    if (p < 0.0) throw DataError("unit model: negative prior entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DataError("unit model: prior does not sum to 1");
  if (dist_matrix.rows() != k || dist_matrix.cols() != k) {
    throw DataError("unit model: distance matrix shape mismatch");
  }
}

Matrix distance_matrix(const Vec& prior_hist) {
  const std::size_t k = prior_hist.size();
  Matrix d(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      d(i, j) = std::sqrt(std::abs(prior_hist[i] - prior_hist[j]));
    }
  }
  return d;
}

std::uint32_t choose_ref_cond(const FrameDataset& ds, RefCondPolicy policy) {
  if (!ds.has_cond_id()) throw DataError("build_proxy: dataset lacks cond_id");
  std::uint32_t max_id = 0;
  for (std::uint32_t c : ds.cond_id) max_id = std::max(max_id, c);
  if (policy == RefCondPolicy::kLowestId) {
    std::uint32_t lowest = max_id;
    for (std::uint32_t c : ds.cond_id) lowest = std::min(lowest, c);
    return lowest;
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(max_id) + 1, 0);
  for (std::uint32_t c : ds.cond_id) ++counts[c];
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c <= max_id; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

UnitModel build_proxy(FrameDataset& ds, std::size_t k, RefCondPolicy policy, std::uint64_t seed,
                      std::size_t max_iters, double tol) {
  ds.validate();
  const std::uint32_t ref = choose_ref_cond(ds, policy);

  std::vector<std::size_t> ref_rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.cond_id[i] == ref) ref_rows.push_back(i);
  }
  if (ref_rows.size() < k) {
    throw ConfigError("build_proxy: reference condition " + std::to_string(ref) + " has " +
                      std::to_string(ref_rows.size()) + " records, need at least " +
                      std::to_string(k));
  }

  Matrix ref_points(ref_rows.size(), ds.d_x);
  for (std::size_t r = 0; r < ref_rows.size(); ++r) {
    const auto row = ds.x_row(ref_rows[r]);
    for (std::size_t c = 0; c < ds.d_x; ++c) ref_points(r, c) = row[c];
  }
  const KmeansResult fit = kmeans_fit(ref_points, k, seed, max_iters, tol);

  UnitModel model;
  model.k = k;
  model.centroids = fit.centroids;
  model.ref_cond = ref;

  ds.proxy_s.resize(ds.size());
  std::vector<double> counts(k, 0.0);
  Vec point(ds.d_x);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto row = ds.x_row(i);
    for (std::size_t c = 0; c < ds.d_x; ++c) point[c] = row[c];
    const std::uint32_t label = kmeans_assign_one(model.centroids, point);
    ds.proxy_s[i] = label;
    counts[label] += 1.0;
  }
  model.prior_hist.resize(k);
  const double n = static_cast<double>(ds.size());
  for (std::size_t j = 0; j < k; ++j) model.prior_hist[j] = counts[j] / n;
  model.dist_matrix = distance_matrix(model.prior_hist);
  return model;
}

AsymmetryReport asymmetry_check(const UnitModel& model, double gap_tol) {
  AsymmetryReport report;
  report.gap_tol = gap_tol;
  report.min_off_diagonal = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < model.k; ++i) {
    report.max_diagonal = std::max(report.max_diagonal, model.dist_matrix(i, i));
    for (std::size_t j = 0; j < model.k; ++j) {
      if (i == j) continue;
      const double v = model.dist_matrix(i, j);
      report.min_off_diagonal = std::min(report.min_off_diagonal, v);
      if (v <= gap_tol) ++report.near_tie_count;
    }
  }
  report.pass = report.min_off_diagonal > gap_tol && report.max_diagonal == 0.0;
  return report;
}

}  // namespace icae::units
