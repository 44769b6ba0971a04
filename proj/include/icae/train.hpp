#pragma once

#include <cstdint>
#include <vector>

#include "icae/genproc/dataset.hpp"
#include "icae/model.hpp"
#include "icae/numkit/adam.hpp"

namespace icae {

struct TrainConfig {
  double lambda = 1.0;
  double lr = 1e-3;
  std::size_t batch_size = 128;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
  bool shuffle = true;

  void validate(std::size_t dataset_size) const;
};

struct EpochStats {
  std::size_t epoch = 0;
  double recon = 0.0;
  double indep = 0.0;
  double total = 0.0;
};

// Minibatch Adam on the two-term objective: squared reconstruction residual
// plus lambda times the squared latent-to-proxy-target distance, both
// averaged per batch. The final short batch is kept. Deterministic for a
// fixed (model, cfg.seed).
std::vector<EpochStats> train(IcaeModel& model, const genproc::FrameDataset& ds,
                              const TrainConfig& cfg);

}  // namespace icae
