#include "icae/verify/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "icae/errors.hpp"
#include "icae/numkit/rng.hpp"

namespace icae::verify {

using numkit::Rng;

namespace {

double median(Vec values) {
  if (values.empty()) throw DataError("median: empty");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ReconstructionReport measure_reconstruction(const ConversionModel& model,
                                            const std::vector<Vec>& xs,
                                            const std::vector<Vec>& cs) {
  if (xs.empty()) throw DataError("measure_reconstruction: empty evaluation set");
  if (xs.size() != cs.size()) throw DataError("measure_reconstruction: x/c count mismatch");
  ReconstructionReport report;
  report.residual_norms.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vec x_hat = model.convert(xs[i], cs[i]);
    const double sq = numkit::squared_distance(x_hat, xs[i]);
    report.residual_norms.push_back(std::sqrt(sq));
    report.epsilon_sq = std::max(report.epsilon_sq, sq);
  }
  report.epsilon = std::sqrt(report.epsilon_sq);
  return report;
}

ReconstructionReport measure_reconstruction(const ConversionModel& model, const FrameDataset& ds) {
  std::vector<Vec> xs, cs;
  xs.reserve(ds.size());
  cs.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    xs.push_back(ds.x_vec(i));
    cs.push_back(ds.c_vec(i));
  }
  return measure_reconstruction(model, xs, cs);
}

double measure_latent_discrepancy(const ConversionModel& model,
                                  const std::vector<ParallelPair>& pairs) {
  if (pairs.empty()) throw DataError("measure_latent_discrepancy: empty pair set");
  double worst = 0.0;
  for (const ParallelPair& p : pairs) {
    const Vec e_src = model.encode(genproc::to_f64(p.x_src));
    const Vec e_tgt = model.encode(genproc::to_f64(p.x_tgt));
    worst = std::max(worst, numkit::squared_distance(e_src, e_tgt));
  }
  return worst;
}

double estimate_lipschitz(const ConversionModel& model, const std::vector<Vec>& latent_samples,
                          const std::vector<Vec>& conditions, std::size_t n_pairs,
                          std::uint64_t seed, double denom_floor,
                          const std::vector<LatentPair>& required_pairs) {
  if (denom_floor <= 0.0) throw ConfigError("estimate_lipschitz: denom_floor must be positive");
  if (latent_samples.size() < 2 && required_pairs.empty()) {
    throw ConfigError("estimate_lipschitz: need at least 2 latent samples");
  }
  Rng rng(seed);
  double worst = -1.0;

  auto consider = [&](const Vec& a, const Vec& b, const Vec& cond, bool required) {
    const double denom = numkit::squared_distance(a, b);
    if (required ? denom == 0.0 : denom < denom_floor) return;
    const Vec da = model.decode(a, cond);
    const Vec db = model.decode(b, cond);
    worst = std::max(worst, numkit::squared_distance(da, db) / denom);
  };

  for (const Vec& cond : conditions) {
    for (std::size_t p = 0; p < n_pairs; ++p) {
      const std::size_t i = static_cast<std::size_t>(rng.next_below(latent_samples.size()));
      std::size_t j = static_cast<std::size_t>(rng.next_below(latent_samples.size() - 1));
      if (j >= i) ++j;
      consider(latent_samples[i], latent_samples[j], cond, false);
    }
  }
  for (const LatentPair& p : required_pairs) consider(p.a, p.b, p.cond, true);

  if (worst < 0.0) throw EstimationError("estimate_lipschitz: all pairs degenerate");
  return worst;
}

ErrorBoundReport check_error_bound(const ConversionModel& model,
                                   const std::vector<ParallelPair>& pairs, std::uint64_t seed,
                                   std::size_t lipschitz_pairs, double denom_floor) {
  if (pairs.empty()) throw DataError("check_error_bound: empty pair set");
  ErrorBoundReport report;
  report.pair_count = pairs.size();

  std::vector<Vec> e_src(pairs.size()), e_tgt(pairs.size());
  std::vector<Vec> tgt_xs(pairs.size()), tgt_cs(pairs.size());
  Vec baselines(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Vec x_src = genproc::to_f64(pairs[i].x_src);
    tgt_xs[i] = genproc::to_f64(pairs[i].x_tgt);
    tgt_cs[i] = genproc::to_f64(pairs[i].c_tgt);
    e_src[i] = model.encode(x_src);
    e_tgt[i] = model.encode(tgt_xs[i]);
    baselines[i] = numkit::squared_distance(x_src, tgt_xs[i]);
  }

  // Epsilon on the target side: x' = d(e(x'), c') + residual.
  const ReconstructionReport recon = measure_reconstruction(model, tgt_xs, tgt_cs);
  report.epsilon = recon.epsilon;
  report.epsilon_sq = recon.epsilon_sq;
  Vec recon_sq(recon.residual_norms.size());
  for (std::size_t i = 0; i < recon_sq.size(); ++i) {
    recon_sq[i] = recon.residual_norms[i] * recon.residual_norms[i];
  }

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    report.epsilon_prime =
        std::max(report.epsilon_prime, numkit::squared_distance(e_src[i], e_tgt[i]));
  }

  // Lipschitz pair set: seeded random latent pairs per condition plus the
  // evaluation encodings themselves, so the bound chain covers every pair
  // it is checked on.
  std::vector<Vec> latents;
  latents.reserve(2 * pairs.size());
  latents.insert(latents.end(), e_src.begin(), e_src.end());
  latents.insert(latents.end(), e_tgt.begin(), e_tgt.end());
  std::vector<Vec> conditions;
  for (const Vec& c : tgt_cs) {
    if (std::find(conditions.begin(), conditions.end(), c) == conditions.end()) {
      conditions.push_back(c);
    }
  }
  std::vector<LatentPair> required(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    required[i] = {e_tgt[i], e_src[i], tgt_cs[i]};
  }
  report.lipschitz_hat = estimate_lipschitz(model, latents, conditions, lipschitz_pairs, seed,
                                            denom_floor, required);

  report.conv_errors.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Vec converted = model.decode(e_src[i], tgt_cs[i]);
    report.conv_errors[i] = numkit::squared_distance(converted, tgt_xs[i]);
  }

  report.bound = 2.0 * (report.lipschitz_hat * report.epsilon_prime +
                        report.epsilon * report.epsilon);
  std::size_t holds = 0;
  for (double err : report.conv_errors) {
    if (err <= report.bound) ++holds;
  }
  report.holds_fraction = static_cast<double>(holds) / static_cast<double>(pairs.size());
  report.conv_error_median = median(report.conv_errors);
  report.recon_sq_median = median(recon_sq);
  report.baseline_median = median(baselines);
  double sq_sum = 0.0;
  for (double sq : recon_sq) sq_sum += sq;
  report.recon_rmse =
      std::sqrt(sq_sum / (static_cast<double>(recon_sq.size()) * static_cast<double>(tgt_xs[0].size())));
  return report;
}

InjectivityReport check_injectivity(const ConversionModel& model, const GenerativeSpec& spec,
                                    std::size_t ref_cond, double margin_tol) {
  if (spec.k_s < 2) throw ConfigError("check_injectivity: need at least 2 categories");
  if (ref_cond >= spec.k_c) throw ConfigError("check_injectivity: ref_cond out of range");
  std::vector<Vec> latents;
  latents.reserve(spec.k_s);
  for (std::size_t s = 0; s < spec.k_s; ++s) {
    latents.push_back(model.encode(genproc::f_apply(spec, s, ref_cond)));
  }
  InjectivityReport report;
  report.margin_tol = margin_tol;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < latents.size(); ++i) {
    for (std::size_t j = i + 1; j < latents.size(); ++j) {
      report.min_margin =
          std::min(report.min_margin, std::sqrt(numkit::squared_distance(latents[i], latents[j])));
    }
  }
  report.pass = report.min_margin > margin_tol;
  return report;
}

TConsistencyReport check_t_consistency(const ConversionModel& model, const GenerativeSpec& spec) {
  if (spec.k_s < 2) throw ConfigError("check_t_consistency: need at least 2 categories");
  TConsistencyReport report;
  report.latent_table.resize(spec.k_s);
  for (std::size_t s = 0; s < spec.k_s; ++s) {
    report.latent_table[s].resize(spec.k_c);
    for (std::size_t c = 0; c < spec.k_c; ++c) {
      report.latent_table[s][c] = model.encode(genproc::f_apply(spec, s, c));
    }
  }

  const std::size_t d = report.latent_table[0][0].size();
  report.cross_cond_spread.resize(spec.k_s, 0.0);
  std::vector<Vec> centers(spec.k_s, Vec(d, 0.0));
  for (std::size_t s = 0; s < spec.k_s; ++s) {
    for (std::size_t c1 = 0; c1 < spec.k_c; ++c1) {
      for (std::size_t j = 0; j < d; ++j) centers[s][j] += report.latent_table[s][c1][j];
      for (std::size_t c2 = c1 + 1; c2 < spec.k_c; ++c2) {
        const double dist = std::sqrt(numkit::squared_distance(report.latent_table[s][c1],
                                                               report.latent_table[s][c2]));
        report.cross_cond_spread[s] = std::max(report.cross_cond_spread[s], dist);
      }
    }
    for (double& v : centers[s]) v /= static_cast<double>(spec.k_c);
  }

  report.inter_s_gap.resize(spec.k_s, std::numeric_limits<double>::infinity());
  for (std::size_t s1 = 0; s1 < spec.k_s; ++s1) {
    for (std::size_t s2 = 0; s2 < spec.k_s; ++s2) {
      if (s1 == s2) continue;
      const double dist = std::sqrt(numkit::squared_distance(centers[s1], centers[s2]));
      report.inter_s_gap[s1] = std::min(report.inter_s_gap[s1], dist);
    }
  }

  report.median_spread = median(report.cross_cond_spread);
  report.median_gap = median(report.inter_s_gap);
  if (report.median_spread == 0.0) {
    report.spread_ratio = 0.0;
  } else if (report.median_gap == 0.0) {
    report.spread_ratio = std::numeric_limits<double>::infinity();
  } else {
    report.spread_ratio = report.median_spread / report.median_gap;
  }
  return report;
}

double silhouette_score(const std::vector<Vec>& points, std::span<const std::uint32_t> labels) {
  const std::size_t n = points.size();
  if (n != labels.size() || n < 2) throw DataError("silhouette: bad input sizes");
  std::uint32_t k = 0;
  for (std::uint32_t l : labels) k = std::max(k, l + 1);

  double total = 0.0;
  std::vector<double> mean_dist(k);
  std::vector<std::size_t> counts(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      mean_dist[labels[j]] += std::sqrt(numkit::squared_distance(points[i], points[j]));
      ++counts[labels[j]];
    }
    const std::uint32_t own = labels[i];
    if (counts[own] == 0) continue;  // singleton cluster scores 0
    const double a = mean_dist[own] / static_cast<double>(counts[own]);
    double b = std::numeric_limits<double>::infinity();
    for (std::uint32_t cl = 0; cl < k; ++cl) {
      if (cl == own || counts[cl] == 0) continue;
      b = std::min(b, mean_dist[cl] / static_cast<double>(counts[cl]));
    }
    if (!std::isfinite(b)) continue;  // single cluster overall
    total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(n);
}

}  // namespace icae::verify
