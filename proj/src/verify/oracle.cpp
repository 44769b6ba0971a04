#include "icae/verify/oracle.hpp"

#include <cmath>
#include <limits>

#include "icae/errors.hpp"

namespace icae::verify {

Vec OracleModel::encode(std::span<const double> x) const {
  const auto [s, c] = genproc::f_invert(spec_, x);
  (void)c;
  return Vec(1, relabel(s));
}

std::size_t OracleModel::nearest_category(double latent) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < spec_.k_s; ++s) {
    const double d = std::abs(latent - relabel(s));
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

std::size_t OracleModel::nearest_condition(std::span<const double> c) const {
  if (c.size() != spec_.d_c) throw ShapeError("oracle decode: condition dimension mismatch");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < spec_.k_c; ++j) {
    const double d = numkit::squared_distance(spec_.cond_table.row(j), c);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

Vec OracleModel::decode(std::span<const double> s_hat, std::span<const double> c) const {
  if (s_hat.size() != 1) throw ShapeError("oracle decode: latent must be one-dimensional");
  return genproc::f_apply(spec_, nearest_category(s_hat[0]), nearest_condition(c));
}

}  // namespace icae::verify
