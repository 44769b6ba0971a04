#pragma once

#include <cstdint>

#include "icae/numkit/net.hpp"

namespace icae::numkit {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_stab = 1e-8;
};

// Per-network Adam moments. Moment shapes mirror the network's parameter
// shapes; step_count advances by one per update.
class AdamState {
 public:
  AdamState(const DenseNet& net, AdamConfig cfg);

  // Standard bias-corrected Adam update, applied in place.
  // Throws NumericError naming the offending layer on non-finite gradients.
  void step(DenseNet& net, const NetGradients& grads);

  std::uint64_t step_count() const { return step_count_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::vector<Matrix> m_weights_, v_weights_;
  std::vector<Vec> m_biases_, v_biases_;
  std::uint64_t step_count_ = 0;
};

}  // namespace icae::numkit
