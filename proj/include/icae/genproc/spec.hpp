#pragma once

#include <cstdint>
#include <utility>

#include "icae/numkit/matrix.hpp"

namespace icae::genproc {

using numkit::Matrix;
using numkit::Vec;

enum class Mixing : std::uint16_t { kAffine = 0, kSmooth = 1 };

const char* mixing_name(Mixing m);

// Ground-truth synthetic process x = f(s, c): discrete content s with a
// strictly descending prior, discrete conditions, and an invertible mixing
// of the two embedding tables.
struct GenerativeSpec {
  std::size_t k_s = 0;      // content categories
  std::size_t k_c = 0;      // condition categories
  std::size_t d_u = 0;      // content embedding dimension
  std::size_t d_c = 0;      // condition embedding dimension
  Vec prior;                // length k_s, strictly descending, sums to 1
  Matrix content_table;     // k_s x d_u rows u(s)
  Matrix cond_table;        // k_c x d_c rows v(c)
  Mixing mixing = Mixing::kAffine;
  Matrix w;                 // invertible (d_u + d_c) square mixing matrix
  Vec offset;               // length d_u + d_c
  double alpha = 0.0;       // smooth-family strength, in [0, 1)
  double sep_min = 0.0;     // guaranteed pairwise row separation (content)
  double cond_sep_min = 0.0;
  std::uint64_t seed = 0;

  std::size_t d_x() const { return d_u + d_c; }
};

struct SpecOptions {
  double prior_ratio = 0.8;     // geometric decay of the content prior
  double alpha = 0.3;           // used by the smooth family only
  double content_scale = 1.0;   // content rows drawn uniform in +-scale
  double cond_scale = 0.35;     // condition rows drawn uniform in +-scale
  double sep_min_factor = 1.0;  // required separation = factor * scale
  double pivot_tol = 1e-10;
  std::size_t max_attempts = 1000;
};

// Builds a spec whose prior is a normalized geometric sequence and whose
// tables satisfy the pairwise-separation requirement. Condition rows are
// drawn at a smaller scale than content rows so that content differences
// dominate distances in x space.
GenerativeSpec make_spec(std::size_t k_s, std::size_t k_c, std::size_t d_u, std::size_t d_c,
                         Mixing mixing, std::uint64_t seed, const SpecOptions& opts = {});

// Smallest gap between any two prior entries.
double prior_gap_min(const GenerativeSpec& spec);

// x = f(s, c). Affine: W [u(s); v(c)] + b. Smooth: elementwise
// g(t) = t + alpha * tanh(t) applied on top (strictly monotone).
Vec f_apply(const GenerativeSpec& spec, std::size_t s, std::size_t c);

// Inverts f on its image; throws NotInImageError otherwise.
std::pair<std::size_t, std::size_t> f_invert(const GenerativeSpec& spec,
                                             std::span<const double> x);

}  // namespace icae::genproc
