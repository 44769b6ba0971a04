#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icae/errors.hpp"
#include "icae/genproc/dataset.hpp"
#include "icae/model.hpp"
#include "icae/verify/checks.hpp"
#include "icae/verify/oracle.hpp"

using namespace icae;
using namespace icae::verify;
using genproc::GenerativeSpec;
using genproc::Mixing;
using genproc::ParallelPair;
using numkit::Matrix;
using numkit::Rng;
using numkit::Vec;

namespace {

// One-hot tables with identity mixing: every f_apply output is 0/1 valued,
// hence exactly representable at float storage width.
GenerativeSpec exact_spec(std::size_t k_s, std::size_t k_c) {
  GenerativeSpec spec;
  spec.k_s = k_s;
  spec.k_c = k_c;
  spec.d_u = k_s;
  spec.d_c = k_c;
  spec.prior.assign(k_s, 0.0);
  double total = 0.0, term = 1.0;
  for (std::size_t i = 0; i < k_s; ++i) {
    spec.prior[i] = term;
    total += term;
    term *= 0.8;
  }
  for (double& p : spec.prior) p /= total;
  spec.content_table = Matrix(k_s, k_s);
  for (std::size_t i = 0; i < k_s; ++i) spec.content_table(i, i) = 1.0;
  spec.cond_table = Matrix(k_c, k_c);
  for (std::size_t i = 0; i < k_c; ++i) spec.cond_table(i, i) = 1.0;
  spec.w = Matrix(k_s + k_c, k_s + k_c);
  for (std::size_t i = 0; i < k_s + k_c; ++i) spec.w(i, i) = 1.0;
  spec.offset.assign(k_s + k_c, 0.0);
  spec.sep_min = 1.0;
  spec.cond_sep_min = 1.0;
  return spec;
}

std::vector<ParallelPair> exact_pairs(const GenerativeSpec& spec) {
  std::vector<ParallelPair> pairs;
  for (std::size_t s = 0; s < spec.k_s; ++s) {
    for (std::size_t c_src = 0; c_src < spec.k_c; ++c_src) {
      for (std::size_t c_tgt = 0; c_tgt < spec.k_c; ++c_tgt) {
        if (c_src == c_tgt) continue;
        ParallelPair p;
        p.shared_s = static_cast<std::uint32_t>(s);
        p.cond_src = static_cast<std::uint32_t>(c_src);
        p.cond_tgt = static_cast<std::uint32_t>(c_tgt);
        p.x_src = genproc::to_f32(genproc::f_apply(spec, s, c_src));
        p.x_tgt = genproc::to_f32(genproc::f_apply(spec, s, c_tgt));
        p.c_src = genproc::to_f32(
            Vec(spec.cond_table.row(c_src).begin(), spec.cond_table.row(c_src).end()));
        p.c_tgt = genproc::to_f32(
            Vec(spec.cond_table.row(c_tgt).begin(), spec.cond_table.row(c_tgt).end()));
        pairs.push_back(std::move(p));
      }
    }
  }
  return pairs;
}

// Stub whose decode is an explicit linear map of the latent.
class LinearDecoderStub final : public ConversionModel {
 public:
  explicit LinearDecoderStub(double slope) : slope_(slope) {}
  std::size_t latent_dim() const override { return 1; }
  Vec encode(std::span<const double> x) const override { return Vec(1, x[0]); }
  Vec decode(std::span<const double> s_hat, std::span<const double>) const override {
    return Vec(1, slope_ * s_hat[0]);
  }

 private:
  double slope_;
};

class ConstantEncoderStub final : public ConversionModel {
 public:
  std::size_t latent_dim() const override { return 1; }
  Vec encode(std::span<const double>) const override { return Vec(1, 0.42); }
  Vec decode(std::span<const double>, std::span<const double>) const override {
    return Vec(1, 0.0);
  }
};

// Leaks the first condition coordinate into the latent.
class CondLeakStub final : public ConversionModel {
 public:
  explicit CondLeakStub(std::size_t d_u) : d_u_(d_u) {}
  std::size_t latent_dim() const override { return 1; }
  Vec encode(std::span<const double> x) const override { return Vec(1, x[d_u_]); }
  Vec decode(std::span<const double>, std::span<const double>) const override {
    return Vec(1, 0.0);
  }

 private:
  std::size_t d_u_;
};

class ShiftStub final : public ConversionModel {
 public:
  ShiftStub(double dx0, double dx1) : d_{dx0, dx1} {}
  std::size_t latent_dim() const override { return 1; }
  Vec encode(std::span<const double> x) const override { return Vec(1, x[0]); }
  Vec decode(std::span<const double> s_hat, std::span<const double>) const override {
    return Vec{s_hat[0] + d_[0], d_[1]};
  }

 private:
  double d_[2];
};

}  // namespace

TEST_CASE("measure_reconstruction: oracle model on exact data is exactly zero") {
  const GenerativeSpec spec = exact_spec(4, 3);
  const OracleModel oracle(spec);
  std::vector<Vec> xs, cs;
  for (std::size_t s = 0; s < spec.k_s; ++s)
    for (std::size_t c = 0; c < spec.k_c; ++c) {
      xs.push_back(genproc::f_apply(spec, s, c));
      cs.push_back(Vec(spec.cond_table.row(c).begin(), spec.cond_table.row(c).end()));
    }
  const ReconstructionReport r = measure_reconstruction(oracle, xs, cs);
  CHECK(r.epsilon == 0.0);
  CHECK(r.epsilon_sq == 0.0);
}

TEST_CASE("measure_reconstruction: hand-evaluated residual (0.3, 0.4)") {
  // decode output shifts x by (0.3, 0.4): residual 2-norm 0.5, squared 0.25.
  class Shift2 final : public ConversionModel {
   public:
    std::size_t latent_dim() const override { return 1; }
    Vec encode(std::span<const double> x) const override { return Vec(1, x[0]); }
    Vec decode(std::span<const double> s, std::span<const double>) const override {
      return Vec{s[0] + 0.3, 0.4};
    }
  } model;
  const ReconstructionReport r = measure_reconstruction(model, {{1.0, 0.0}}, {{0.0}});
  CHECK(r.epsilon == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.epsilon_sq == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("measure_reconstruction: epsilon_sq is always the square of epsilon") {
  const GenerativeSpec spec = genproc::make_spec(4, 3, 3, 2, Mixing::kAffine, 3);
  const IcaeModel model = make_icae_model(spec.d_x(), spec.d_c, 1, {6}, 4,
                                          numkit::Activation::kTanh, 4);
  const genproc::FrameDataset ds = genproc::sample_dataset(spec, 50, 5);
  const ReconstructionReport r = measure_reconstruction(model, ds);
  CHECK(r.epsilon_sq == doctest::Approx(r.epsilon * r.epsilon).epsilon(1e-12));
  CHECK(r.residual_norms.size() == 50);
}

TEST_CASE("measure_latent_discrepancy: oracle encodings coincide exactly") {
  const GenerativeSpec spec = exact_spec(5, 3);
  const OracleModel oracle(spec);
  const auto pairs = exact_pairs(spec);
  CHECK(measure_latent_discrepancy(oracle, pairs) == 0.0);
}

TEST_CASE("measure_latent_discrepancy: hand-evaluated 0.1 vs 0.3") {
  LinearDecoderStub model(1.0);  // encode = first coordinate
  ParallelPair p;
  p.x_src = {0.1f};
  p.x_tgt = {0.3f};
  p.c_src = {0.0f};
  p.c_tgt = {0.0f};
  const double eps_prime = measure_latent_discrepancy(model, {p});
  CHECK(eps_prime == doctest::Approx(0.04).epsilon(1e-6));
}

TEST_CASE("measure_latent_discrepancy: adding a pair never decreases the maximum") {
  const GenerativeSpec spec = genproc::make_spec(4, 3, 3, 2, Mixing::kAffine, 7);
  const IcaeModel model = make_icae_model(spec.d_x(), spec.d_c, 1, {6}, 4,
                                          numkit::Activation::kTanh, 8);
  const auto pairs = genproc::sample_parallel_pairs(spec, 40, 9);
  std::vector<ParallelPair> subset(pairs.begin(), pairs.begin() + 20);
  const double small = measure_latent_discrepancy(model, subset);
  const double full = measure_latent_discrepancy(model, pairs);
  CHECK(full >= small);
}

TEST_CASE("estimate_lipschitz: constant decoder estimates zero") {
  class ConstDecoder final : public ConversionModel {
   public:
    std::size_t latent_dim() const override { return 1; }
    Vec encode(std::span<const double> x) const override { return Vec(1, x[0]); }
    Vec decode(std::span<const double>, std::span<const double>) const override {
      return Vec{3.0, -1.0};
    }
  } model;
  std::vector<Vec> latents = {{0.0}, {0.5}, {1.0}, {-0.7}};
  CHECK(estimate_lipschitz(model, latents, {{0.0}}, 50, 1) == 0.0);
}

TEST_CASE("estimate_lipschitz: identity decoder estimates one") {
  LinearDecoderStub model(1.0);
  std::vector<Vec> latents = {{0.0}, {0.5}, {1.0}, {-0.7}};
  CHECK(estimate_lipschitz(model, latents, {{0.0}}, 50, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("estimate_lipschitz: slope-2 decoder estimates four (squared convention)") {
  LinearDecoderStub model(2.0);
  std::vector<Vec> latents = {{0.1}, {0.4}, {-0.9}, {0.8}};
  CHECK(estimate_lipschitz(model, latents, {{0.0}}, 50, 3) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("estimate_lipschitz: all-degenerate pairs raise an estimation error") {
  LinearDecoderStub model(1.0);
  std::vector<Vec> latents = {{0.5}, {0.5}, {0.5}};
  CHECK_THROWS_AS(estimate_lipschitz(model, latents, {{0.0}}, 20, 4), EstimationError);
}

TEST_CASE("check_error_bound: oracle model collapses to zeros with holds_fraction one") {
  const GenerativeSpec spec = exact_spec(5, 3);
  const OracleModel oracle(spec);
  const auto pairs = exact_pairs(spec);
  const ErrorBoundReport r = check_error_bound(oracle, pairs, 11);
  CHECK(r.epsilon == 0.0);
  CHECK(r.epsilon_prime == 0.0);
  for (double e : r.conv_errors) CHECK(e == 0.0);
  CHECK(r.holds_fraction == 1.0);
  CHECK(r.bound == 0.0);
}

TEST_CASE("check_error_bound: direct formula composition") {
  // epsilon 0.1 (norm), epsilon' 0.01, L 2 -> bound 2 (2 * 0.01 + 0.1^2) = 0.06.
  CHECK(2.0 * (2.0 * 0.01 + 0.1 * 0.1) == doctest::Approx(0.06).epsilon(1e-15));

  const GenerativeSpec spec = genproc::make_spec(5, 3, 4, 2, Mixing::kAffine, 13);
  const IcaeModel model = make_icae_model(spec.d_x(), spec.d_c, 1, {8}, 5,
                                          numkit::Activation::kTanh, 14);
  const auto pairs = genproc::sample_parallel_pairs(spec, 60, 15);
  const ErrorBoundReport r = check_error_bound(model, pairs, 16);
  CHECK(r.bound == doctest::Approx(2.0 * (r.lipschitz_hat * r.epsilon_prime +
                                          r.epsilon * r.epsilon)).epsilon(1e-15));
}

TEST_CASE("check_error_bound: pointwise bound holds even for untrained models") {
  // The chain is pointwise algebra over the covered pairs, so it must hold
  // for any model, trained or not.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GenerativeSpec spec = genproc::make_spec(6, 4, 4, 3, Mixing::kSmooth, 20 + seed);
    const IcaeModel model = make_icae_model(spec.d_x(), spec.d_c, 1, {10}, 6,
                                            numkit::Activation::kTanh, 30 + seed);
    const auto pairs = genproc::sample_parallel_pairs(spec, 80, 40 + seed);
    const ErrorBoundReport r = check_error_bound(model, pairs, 50 + seed);
    CHECK(r.holds_fraction == 1.0);
  }
}

TEST_CASE("check_error_bound: maxima never decrease when the pair set grows") {
  const GenerativeSpec spec = genproc::make_spec(5, 3, 4, 2, Mixing::kAffine, 61);
  const IcaeModel model = make_icae_model(spec.d_x(), spec.d_c, 1, {8}, 5,
                                          numkit::Activation::kTanh, 62);
  const auto pairs = genproc::sample_parallel_pairs(spec, 60, 63);
  const std::vector<ParallelPair> subset(pairs.begin(), pairs.begin() + 30);
  const ErrorBoundReport small = check_error_bound(model, subset, 64);
  const ErrorBoundReport full = check_error_bound(model, pairs, 64);
  CHECK(full.epsilon >= small.epsilon);
  CHECK(full.epsilon_prime >= small.epsilon_prime);
}

TEST_CASE("check_injectivity: oracle margin equals the relabeling gap") {
  const GenerativeSpec spec = exact_spec(6, 3);
  const OracleModel oracle(spec, 0.25);
  const InjectivityReport r = check_injectivity(oracle, spec, 0, 1e-6);
  CHECK(r.pass);
  CHECK(r.min_margin == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("check_injectivity: constant encoder fails with zero margin") {
  const GenerativeSpec spec = exact_spec(4, 2);
  const ConstantEncoderStub model;
  const InjectivityReport r = check_injectivity(model, spec, 0, 1e-6);
  CHECK_FALSE(r.pass);
  CHECK(r.min_margin == 0.0);
}

TEST_CASE("check_t_consistency: oracle model has zero spread") {
  const GenerativeSpec spec = exact_spec(5, 4);
  const OracleModel oracle(spec);
  const TConsistencyReport r = check_t_consistency(oracle, spec);
  for (double s : r.cross_cond_spread) CHECK(s == 0.0);
  CHECK(r.spread_ratio == 0.0);
  CHECK(r.median_gap == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("check_t_consistency: condition leak is flagged by a huge ratio") {
  const GenerativeSpec spec = exact_spec(4, 3);
  const CondLeakStub model(spec.d_u);
  const TConsistencyReport r = check_t_consistency(model, spec);
  CHECK(r.median_spread > 0.0);
  CHECK(r.spread_ratio > 1.0);
}

TEST_CASE("silhouette: well-separated clusters score near one") {
  std::vector<Vec> points;
  std::vector<std::uint32_t> labels;
  Rng rng(71);
  for (int cluster = 0; cluster < 3; ++cluster) {
    for (int i = 0; i < 10; ++i) {
      points.push_back({cluster * 10.0 + rng.uniform(-0.1, 0.1)});
      labels.push_back(static_cast<std::uint32_t>(cluster));
    }
  }
  CHECK(silhouette_score(points, labels) > 0.95);
}

TEST_CASE("silhouette: interleaved labels score poorly") {
  std::vector<Vec> points;
  std::vector<std::uint32_t> labels;
  Rng rng(73);
  for (int i = 0; i < 30; ++i) {
    points.push_back({rng.uniform(-1, 1)});
    labels.push_back(static_cast<std::uint32_t>(i % 2));
  }
  CHECK(silhouette_score(points, labels) < 0.2);
}
