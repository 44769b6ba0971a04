#include "icae/genproc/dataset.hpp"

#include <cmath>
#include <string>

#include "icae/errors.hpp"
#include "icae/numkit/rng.hpp"

namespace icae::genproc {

using numkit::Rng;

Vec FrameDataset::x_vec(std::size_t i) const { return to_f64(x_row(i)); }
Vec FrameDataset::c_vec(std::size_t i) const { return to_f64(c_row(i)); }

void FrameDataset::validate() const {
  if (d_x == 0 || d_c == 0) throw DataError("dataset: dimensions must be positive");
  const std::size_t n = size();
  if (xs.size() != n * d_x || cs.size() != n * d_c) {
    throw DataError("dataset: value array lengths inconsistent with dimensions");
  }
  auto check_col = [n](const std::vector<std::uint32_t>& col, const char* name) {
    if (!col.empty() && col.size() != n) {
      throw DataError(std::string("dataset: column ") + name +
                      " present for some records but not all");
    }
  };
  check_col(cond_id, "cond_id");
  check_col(true_s, "true_s");
  check_col(proxy_s, "proxy_s");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw DataError("dataset: non-finite x value at record " +
                                               std::to_string(i / d_x));
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!std::isfinite(cs[i])) throw DataError("dataset: non-finite c value at record " +
                                               std::to_string(i / d_c));
  }
}

std::vector<float> to_f32(std::span<const double> v) {
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i]);
  return out;
}

Vec to_f64(std::span<const float> v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
  return out;
}

FrameDataset sample_dataset(const GenerativeSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample_dataset: n must be >= 1");
  Rng rng(seed);
  FrameDataset ds;
  ds.d_x = spec.d_x();
  ds.d_c = spec.d_c;
  ds.xs.reserve(n * ds.d_x);
  ds.cs.reserve(n * ds.d_c);
  ds.cond_id.reserve(n);
  ds.true_s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = rng.categorical(spec.prior);
    const std::size_t c = static_cast<std::size_t>(rng.next_below(spec.k_c));
    const Vec x = f_apply(spec, s, c);
    for (double v : x) ds.xs.push_back(static_cast<float>(v));
    for (double v : spec.cond_table.row(c)) ds.cs.push_back(static_cast<float>(v));
    ds.cond_id.push_back(static_cast<std::uint32_t>(c));
    ds.true_s.push_back(static_cast<std::uint32_t>(s));
  }
  return ds;
}

std::vector<ParallelPair> sample_parallel_pairs(const GenerativeSpec& spec, std::size_t n,
                                                std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample_parallel_pairs: n must be >= 1");
  Rng rng(seed);
  std::vector<ParallelPair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = rng.categorical(spec.prior);
    const std::size_t c_src = static_cast<std::size_t>(rng.next_below(spec.k_c));
    std::size_t c_tgt = static_cast<std::size_t>(rng.next_below(spec.k_c - 1));
    if (c_tgt >= c_src) ++c_tgt;  // distinct target condition
    ParallelPair p;
    p.shared_s = static_cast<std::uint32_t>(s);
    p.cond_src = static_cast<std::uint32_t>(c_src);
    p.cond_tgt = static_cast<std::uint32_t>(c_tgt);
    p.x_src = to_f32(f_apply(spec, s, c_src));
    p.x_tgt = to_f32(f_apply(spec, s, c_tgt));
    p.c_src = to_f32(Vec(spec.cond_table.row(c_src).begin(), spec.cond_table.row(c_src).end()));
    p.c_tgt = to_f32(Vec(spec.cond_table.row(c_tgt).begin(), spec.cond_table.row(c_tgt).end()));
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace icae::genproc
