#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "icae/genproc/spec.hpp"

namespace icae::genproc {

// Frame records (x, c) with optional category annotations. Values are held
// as 32-bit floats, the same width the on-disk format uses, so in-memory
// and round-tripped datasets are bit-identical.
struct FrameDataset {
  std::size_t d_x = 0;
  std::size_t d_c = 0;
  std::vector<float> xs;               // n x d_x, row-major
  std::vector<float> cs;               // n x d_c, row-major
  std::vector<std::uint32_t> cond_id;  // empty when absent
  std::vector<std::uint32_t> true_s;   // empty when absent
  std::vector<std::uint32_t> proxy_s;  // empty when absent

  std::size_t size() const { return d_x == 0 ? 0 : xs.size() / d_x; }
  bool has_cond_id() const { return !cond_id.empty(); }
  bool has_true_s() const { return !true_s.empty(); }
  bool has_proxy_s() const { return !proxy_s.empty(); }

  std::span<const float> x_row(std::size_t i) const { return {xs.data() + i * d_x, d_x}; }
  std::span<const float> c_row(std::size_t i) const { return {cs.data() + i * d_c, d_c}; }

  // Copies of a record's values widened to double for arithmetic.
  Vec x_vec(std::size_t i) const;
  Vec c_vec(std::size_t i) const;

  // Throws DataError on non-finite values or inconsistent optional columns.
  void validate() const;
};

// Two observations generated from the same content under two conditions.
struct ParallelPair {
  std::vector<float> x_src, x_tgt;
  std::vector<float> c_src, c_tgt;
  std::uint32_t shared_s = 0;
  std::uint32_t cond_src = 0;
  std::uint32_t cond_tgt = 0;
};

// Draws s from the content prior and c uniformly, independently; every
// record satisfies x = f(s, c).
FrameDataset sample_dataset(const GenerativeSpec& spec, std::size_t n, std::uint64_t seed);

// Pairs reuse one content draw under two distinct conditions.
std::vector<ParallelPair> sample_parallel_pairs(const GenerativeSpec& spec, std::size_t n,
                                                std::uint64_t seed);

// Narrows a double vector to the dataset's float storage width.
std::vector<float> to_f32(std::span<const double> v);
Vec to_f64(std::span<const float> v);

}  // namespace icae::genproc
