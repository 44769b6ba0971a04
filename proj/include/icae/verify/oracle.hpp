#pragma once

#include "icae/genproc/spec.hpp"
#include "icae/model.hpp"

namespace icae::verify {

// Perfect-model test double: the encoder recovers the true content category
// through the generative oracle and emits a fixed strictly monotone
// relabeling of it; the decoder inverts the relabeling and applies f. Used
// as ground truth for every perfect-model limit.
class OracleModel final : public ConversionModel {
 public:
  // Latent for category s is (s - (k_s - 1) / 2) * gap, so adjacent
  // categories sit exactly `gap` apart.
  OracleModel(const genproc::GenerativeSpec& spec, double gap = 0.25)
      : spec_(spec), gap_(gap) {}

  std::size_t latent_dim() const override { return 1; }

  double relabel(std::size_t s) const {
    return (static_cast<double>(s) - (static_cast<double>(spec_.k_s) - 1.0) / 2.0) * gap_;
  }
  double relabel_gap() const { return gap_; }

  LabelScale label_scale() const {
    return {(static_cast<double>(spec_.k_s) - 1.0) / 2.0, gap_};
  }

  Vec encode(std::span<const double> x) const override;
  Vec decode(std::span<const double> s_hat, std::span<const double> c) const override;

 private:
  std::size_t nearest_category(double latent) const;
  std::size_t nearest_condition(std::span<const double> c) const;

  const genproc::GenerativeSpec& spec_;
  double gap_;
};

}  // namespace icae::verify
