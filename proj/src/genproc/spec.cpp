#include "icae/genproc/spec.hpp"

#include <cmath>
#include <string>

#include "icae/errors.hpp"
#include "icae/numkit/rng.hpp"

namespace icae::genproc {

using numkit::LuFactorization;
using numkit::Rng;

const char* mixing_name(Mixing m) { return m == Mixing::kAffine ? "affine" : "smooth"; }

namespace {

// Rejection-samples a table whose rows are pairwise separated by at least
// sep. Throws ConfigError when separation is unreachable.
Matrix sample_separated_table(std::size_t rows, std::size_t cols, double scale, double sep,
                              std::size_t max_attempts, Rng& rng, const char* what) {
  Matrix table(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      for (std::size_t c = 0; c < cols; ++c) table(r, c) = rng.uniform(-scale, scale);
      placed = true;
      for (std::size_t prev = 0; prev < r && placed; ++prev) {
        if (numkit::squared_distance(table.row(r), table.row(prev)) < sep * sep) placed = false;
      }
    }
    if (!placed) {
      throw ConfigError(std::string(what) + " table: row separation " + std::to_string(sep) +
                        " unreachable after " + std::to_string(max_attempts) + " attempts");
    }
  }
  return table;
}

inline double smooth_g(double t, double alpha) { return t + alpha * std::tanh(t); }

// Solves g(t) = y by Newton iteration; g' = 1 + alpha * sech^2 >= 1.
double smooth_g_inverse(double y, double alpha, std::size_t max_iters, double tol) {
  double t = y;
  for (std::size_t i = 0; i < max_iters; ++i) {
    const double th = std::tanh(t);
    const double residual = t + alpha * th - y;
    if (std::abs(residual) <= tol) return t;
    t -= residual / (1.0 + alpha * (1.0 - th * th));
  }
  const double th = std::tanh(t);
  if (std::abs(t + alpha * th - y) <= tol) return t;
  throw NotInImageError("smooth inverse: Newton did not converge");
}

std::size_t nearest_row(const Matrix& table, std::span<const double> v, double& best_sq) {
  std::size_t best = 0;
  best_sq = numkit::squared_distance(table.row(0), v);
  for (std::size_t r = 1; r < table.rows(); ++r) {
    const double d = numkit::squared_distance(table.row(r), v);
    if (d < best_sq) {
      best_sq = d;
      best = r;
    }
  }
  return best;
}

}  // namespace

GenerativeSpec make_spec(std::size_t k_s, std::size_t k_c, std::size_t d_u, std::size_t d_c,
                         Mixing mixing, std::uint64_t seed, const SpecOptions& opts) {
  if (k_s < 2) throw ConfigError("make_spec: k_s must be >= 2");
  if (k_c < 2) throw ConfigError("make_spec: k_c must be >= 2");
  if (d_u < 1 || d_c < 1) throw ConfigError("make_spec: dims must be >= 1");
  if (opts.prior_ratio <= 0.0 || opts.prior_ratio >= 1.0) {
    throw ConfigError("make_spec: prior_ratio must lie in (0, 1)");
  }
  if (opts.alpha < 0.0 || opts.alpha >= 1.0) throw ConfigError("make_spec: alpha must lie in [0, 1)");

  GenerativeSpec spec;
  spec.k_s = k_s;
  spec.k_c = k_c;
  spec.d_u = d_u;
  spec.d_c = d_c;
  spec.mixing = mixing;
  spec.alpha = mixing == Mixing::kSmooth ? opts.alpha : 0.0;
  spec.seed = seed;

  // Normalized geometric prior: strictly descending with all entries
  // distinct by construction.
  spec.prior.resize(k_s);
  double term = 1.0, total = 0.0;
  for (std::size_t i = 0; i < k_s; ++i) {
    spec.prior[i] = term;
    total += term;
    term *= opts.prior_ratio;
  }
  for (double& p : spec.prior) p /= total;

  Rng rng(seed);
  spec.sep_min = opts.sep_min_factor * opts.content_scale;
  spec.cond_sep_min = opts.sep_min_factor * opts.cond_scale;
  spec.content_table = sample_separated_table(k_s, d_u, opts.content_scale, spec.sep_min,
                                              opts.max_attempts, rng, "content");
  spec.cond_table = sample_separated_table(k_c, d_c, opts.cond_scale, spec.cond_sep_min,
                                           opts.max_attempts, rng, "condition");

  const std::size_t d = d_u + d_c;
  const double w_scale = 1.5 / std::sqrt(static_cast<double>(d));
  for (std::size_t attempt = 0; attempt < opts.max_attempts; ++attempt) {
    spec.w = Matrix(d, d);
    for (double& v : spec.w.data()) v = rng.uniform(-w_scale, w_scale);
    if (LuFactorization(spec.w).invertible(opts.pivot_tol)) break;
    if (attempt + 1 == opts.max_attempts) {
      throw ConfigError("make_spec: no invertible mixing matrix found");
    }
  }
  spec.offset.resize(d);
  for (double& v : spec.offset) v = rng.uniform(-0.5, 0.5);
  return spec;
}

double prior_gap_min(const GenerativeSpec& spec) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.prior.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.prior.size(); ++j) {
      gap = std::min(gap, std::abs(spec.prior[i] - spec.prior[j]));
    }
  }
  return gap;
}

Vec f_apply(const GenerativeSpec& spec, std::size_t s, std::size_t c) {
  if (s >= spec.k_s) throw ConfigError("f_apply: content index out of range");
  if (c >= spec.k_c) throw ConfigError("f_apply: condition index out of range");
  Vec z(spec.d_x());
  const auto u = spec.content_table.row(s);
  const auto v = spec.cond_table.row(c);
  std::copy(u.begin(), u.end(), z.begin());
  std::copy(v.begin(), v.end(), z.begin() + static_cast<std::ptrdiff_t>(spec.d_u));
  Vec x = numkit::matvec(spec.w, z);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += spec.offset[i];
  if (spec.mixing == Mixing::kSmooth) {
    for (double& t : x) t = smooth_g(t, spec.alpha);
  }
  return x;
}

std::pair<std::size_t, std::size_t> f_invert(const GenerativeSpec& spec,
                                             std::span<const double> x) {
  if (x.size() != spec.d_x()) throw ShapeError("f_invert: x has wrong dimension");
  Vec y(x.begin(), x.end());
  if (spec.mixing == Mixing::kSmooth) {
    for (double& t : y) t = smooth_g_inverse(t, spec.alpha, 50, 1e-12);
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= spec.offset[i];
  const Vec z = LuFactorization(spec.w).solve(y);

  const std::span<const double> zu(z.data(), spec.d_u);
  const std::span<const double> zv(z.data() + spec.d_u, spec.d_c);
  double du_sq = 0.0, dv_sq = 0.0;
  const std::size_t s = nearest_row(spec.content_table, zu, du_sq);
  const std::size_t c = nearest_row(spec.cond_table, zv, dv_sq);
  const double half_u = spec.sep_min / 2.0;
  const double half_c = spec.cond_sep_min / 2.0;
  if (du_sq > half_u * half_u || dv_sq > half_c * half_c) {
    throw NotInImageError("f_invert: point is not in the image of f (nearest-row distance " +
                          std::to_string(std::sqrt(std::max(du_sq, dv_sq))) + ")");
  }
  return {s, c};
}

}  // namespace icae::genproc
