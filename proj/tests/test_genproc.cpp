#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "icae/errors.hpp"
#include "icae/genproc/dataset.hpp"
#include "icae/genproc/spec.hpp"

using namespace icae;
using namespace icae::genproc;
using numkit::Matrix;
using numkit::Vec;

namespace {

// Hand-built spec with identity mixing and one-hot tables.
GenerativeSpec identity_spec(std::size_t k_s, std::size_t k_c) {
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

}  // namespace

TEST_CASE("make_spec: prior matches normalized geometric sequence") {
  SpecOptions opts;
  opts.prior_ratio = 0.7;
  const GenerativeSpec spec = make_spec(4, 2, 3, 2, Mixing::kAffine, 1, opts);

  // Independent oracle: normalize (1, 0.7, 0.49, 0.343) directly.
  const double raw[4] = {1.0, 0.7, 0.49, 0.343};
  const double total = raw[0] + raw[1] + raw[2] + raw[3];
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(spec.prior[i] == doctest::Approx(raw[i] / total).epsilon(1e-12));
  }
  CHECK(spec.prior[0] == doctest::Approx(0.3948).epsilon(1e-3));
  CHECK(spec.prior[1] == doctest::Approx(0.2764).epsilon(1e-3));
  CHECK(spec.prior[2] == doctest::Approx(0.1935).epsilon(1e-3));
  CHECK(spec.prior[3] == doctest::Approx(0.1354).epsilon(1e-3));
}

TEST_CASE("make_spec: prior strictly descending, sums to one, gaps positive") {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const GenerativeSpec spec = make_spec(20, 5, 8, 4, Mixing::kAffine, seed);
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.prior.size(); ++i) {
      sum += spec.prior[i];
      if (i > 0) CHECK(spec.prior[i] < spec.prior[i - 1]);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prior_gap_min(spec) > 0.0);
  }
}

TEST_CASE("make_spec: fixed seed reproduces the spec exactly") {
  const GenerativeSpec a = make_spec(6, 3, 4, 2, Mixing::kSmooth, 1234);
  const GenerativeSpec b = make_spec(6, 3, 4, 2, Mixing::kSmooth, 1234);
  CHECK(a.prior == b.prior);
  CHECK(a.content_table == b.content_table);
  CHECK(a.cond_table == b.cond_table);
  CHECK(a.w == b.w);
  CHECK(a.offset == b.offset);
}

TEST_CASE("make_spec: content rows meet the separation requirement") {
  const GenerativeSpec spec = make_spec(20, 5, 8, 4, Mixing::kAffine, 7);
  for (std::size_t i = 0; i < spec.k_s; ++i) {
    for (std::size_t j = i + 1; j < spec.k_s; ++j) {
      const double d = std::sqrt(
          numkit::squared_distance(spec.content_table.row(i), spec.content_table.row(j)));
      CHECK(d >= spec.sep_min);
    }
  }
}

TEST_CASE("f_apply: identity mixing concatenates one-hot rows") {
  const GenerativeSpec spec = identity_spec(3, 2);
  const Vec x = f_apply(spec, 1, 0);
  const Vec expected = {0, 1, 0, 1, 0};
  REQUIRE(x.size() == expected.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == expected[i]);
}

TEST_CASE("f_apply: smooth family with alpha 0 equals affine") {
  GenerativeSpec affine = make_spec(4, 3, 3, 2, Mixing::kAffine, 5);
  GenerativeSpec smooth = affine;
  smooth.mixing = Mixing::kSmooth;
  smooth.alpha = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t c = 0; c < 3; ++c) {
      const Vec a = f_apply(affine, s, c);
      const Vec b = f_apply(smooth, s, c);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
  }
}

TEST_CASE("f_apply: all (s, c) outputs pairwise distinct") {
  const GenerativeSpec spec = make_spec(5, 3, 4, 3, Mixing::kAffine, 11);
  std::vector<Vec> outputs;
  for (std::size_t s = 0; s < 5; ++s)
    for (std::size_t c = 0; c < 3; ++c) outputs.push_back(f_apply(spec, s, c));
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (std::size_t j = i + 1; j < outputs.size(); ++j) {
      min_dist = std::min(min_dist, std::sqrt(numkit::squared_distance(outputs[i], outputs[j])));
    }
  }
  CHECK(min_dist > 1e-9);
}

TEST_CASE("f_apply: out-of-range index throws") {
  const GenerativeSpec spec = make_spec(3, 2, 2, 2, Mixing::kAffine, 1);
  CHECK_THROWS_AS(f_apply(spec, 3, 0), ConfigError);
  CHECK_THROWS_AS(f_apply(spec, 0, 2), ConfigError);
}

TEST_CASE("f_invert: exhaustive round trip on an affine spec") {
  const GenerativeSpec spec = make_spec(6, 4, 5, 3, Mixing::kAffine, 21);
  for (std::size_t s = 0; s < 6; ++s) {
    for (std::size_t c = 0; c < 4; ++c) {
      const auto [s2, c2] = f_invert(spec, f_apply(spec, s, c));
      CHECK(s2 == s);
      CHECK(c2 == c);
    }
  }
}

TEST_CASE("f_invert: exhaustive round trip on a smooth spec with alpha 0.5") {
  SpecOptions opts;
  opts.alpha = 0.5;
  const GenerativeSpec spec = make_spec(6, 4, 5, 3, Mixing::kSmooth, 22, opts);
  for (std::size_t s = 0; s < 6; ++s) {
    for (std::size_t c = 0; c < 4; ++c) {
      const Vec x = f_apply(spec, s, c);
      const auto [s2, c2] = f_invert(spec, x);
      CHECK(s2 == s);
      CHECK(c2 == c);
      // Forward residual of the recovered categories.
      const Vec x2 = f_apply(spec, s2, c2);
      CHECK(std::sqrt(numkit::squared_distance(x, x2)) < 1e-6);
    }
  }
}

TEST_CASE("f_invert: large off-image perturbation is rejected") {
  const GenerativeSpec spec = make_spec(4, 3, 4, 2, Mixing::kAffine, 31);
  Vec x = f_apply(spec, 1, 1);
  for (double& v : x) v += 25.0;
  CHECK_THROWS_AS(f_invert(spec, x), NotInImageError);
}

TEST_CASE("sample_dataset: empirical content frequencies track the prior") {
  const GenerativeSpec spec = make_spec(4, 3, 3, 2, Mixing::kAffine, 41);
  const FrameDataset ds = sample_dataset(spec, 10000, 42);
  std::vector<double> freq(4, 0.0);
  for (std::uint32_t s : ds.true_s) freq[s] += 1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(freq[i] / 10000.0 - spec.prior[i]) < 0.02);
  }
}

TEST_CASE("sample_dataset: records reproduce f_apply bit-exactly at storage width") {
  const GenerativeSpec spec = make_spec(5, 3, 4, 3, Mixing::kSmooth, 51);
  const FrameDataset ds = sample_dataset(spec, 200, 52);
  ds.validate();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Vec x = f_apply(spec, ds.true_s[i], ds.cond_id[i]);
    const auto row = ds.x_row(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      CHECK(row[j] == static_cast<float>(x[j]));
    }
    const auto crow = ds.c_row(i);
    for (std::size_t j = 0; j < ds.d_c; ++j) {
      CHECK(crow[j] == static_cast<float>(spec.cond_table(ds.cond_id[i], j)));
    }
  }
}

TEST_CASE("sample_dataset: joint (s, c) table passes a chi-square independence check") {
  const GenerativeSpec spec = make_spec(5, 4, 3, 2, Mixing::kAffine, 61);
  const FrameDataset ds = sample_dataset(spec, 20000, 62);
  Matrix counts(5, 4);
  for (std::size_t i = 0; i < ds.size(); ++i) counts(ds.true_s[i], ds.cond_id[i]) += 1.0;
  Vec row_sum(5, 0.0), col_sum(4, 0.0);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      row_sum[r] += counts(r, c);
      col_sum[c] += counts(r, c);
    }
  double stat = 0.0;
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double expected = row_sum[r] * col_sum[c] / 20000.0;
      const double diff = counts(r, c) - expected;
      stat += diff * diff / expected;
    }
  }
  // chi-square 99th percentile at df = (5-1)(4-1) = 12
  CHECK(stat < 26.217);
}

TEST_CASE("sample_parallel_pairs: both sides share the content category") {
  const GenerativeSpec spec = make_spec(6, 4, 5, 3, Mixing::kAffine, 71);
  const auto pairs = sample_parallel_pairs(spec, 100, 72);
  for (const ParallelPair& p : pairs) {
    CHECK(p.cond_src != p.cond_tgt);
    const auto [s_src, c_src] = f_invert(spec, to_f64(p.x_src));
    const auto [s_tgt, c_tgt] = f_invert(spec, to_f64(p.x_tgt));
    CHECK(s_src == p.shared_s);
    CHECK(s_tgt == p.shared_s);
    CHECK(c_src == p.cond_src);
    CHECK(c_tgt == p.cond_tgt);
  }
}

TEST_CASE("dataset validate: inconsistent optional column is flagged") {
  const GenerativeSpec spec = make_spec(3, 2, 2, 2, Mixing::kAffine, 81);
  FrameDataset ds = sample_dataset(spec, 10, 82);
  ds.true_s.pop_back();
  CHECK_THROWS_AS(ds.validate(), DataError);
}
