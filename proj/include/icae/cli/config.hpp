#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icae/genproc/spec.hpp"
#include "icae/numkit/net.hpp"
#include "icae/units/units.hpp"

namespace icae::cli {

// Experiment parameters, parsed from `key = value` text with `#` comments.
// Unknown keys are rejected; every value is validated against the owning
// module's preconditions at load time.
struct ExperimentConfig {
  // generative process
  std::size_t k_s = 20;
  std::size_t k_c = 5;
  std::size_t d_u = 8;
  std::size_t d_c = 4;
  genproc::Mixing mixing = genproc::Mixing::kAffine;
  double alpha = 0.3;
  double prior_ratio = 0.8;
  std::size_t n_train = 20000;
  std::size_t n_eval_pairs = 2000;

  // proxy units
  std::size_t k_units = 100;
  units::RefCondPolicy ref_cond_policy = units::RefCondPolicy::kMostRecords;

  // model and training
  std::size_t d_latent = 1;
  std::vector<std::size_t> hidden_dims = {64, 64};
  numkit::Activation activation = numkit::Activation::kTanh;
  double lambda = 1.0;
  double lr = 1e-3;
  std::size_t batch_size = 128;
  std::size_t epochs = 100;
  bool shuffle = true;

  // diagnostics and tolerances
  std::uint64_t seed = 0;
  std::size_t n_perm = 199;
  std::size_t hsic_n = 2000;
  double hsic_alpha = 0.05;
  double gap_tol = 1e-3;
  double margin_tol = 1e-3;
  double spread_ratio_max = 0.25;
  double denom_floor = 1e-10;
  std::size_t lipschitz_pairs = 200;

  // optional external dataset consumed by the units/train stages
  std::string dataset_path;
  std::string dataset_format = "binary";  // binary | csv

  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical text form; parse_config(serialize_config(cfg)) reproduces cfg.
std::string serialize_config(const ExperimentConfig& cfg);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace icae::cli
