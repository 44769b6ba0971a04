#pragma once

#include <string>
#include <vector>

#include "icae/cli/config.hpp"

namespace icae::cli {

struct StageSelection {
  bool gen = false;
  bool units = false;
  bool train = false;
  bool convert = false;
  bool verify = false;

  static StageSelection all() { return {true, true, true, true, true}; }
  // Accepts gen | units | train | convert | verify | all.
  static StageSelection parse(const std::string& name);
};

struct PipelineOutcome {
  bool checks_passed = true;
  std::vector<std::string> failed_checks;
};

// Runs the selected stages in order, communicating only through files in
// out_dir. Module errors propagate as exceptions after partially written
// stage outputs are removed.
PipelineOutcome run_pipeline(const ExperimentConfig& cfg, const StageSelection& stages,
                             const std::string& out_dir, bool quiet = false);

// Deterministic per-stage sub-seed streams derived from the global seed.
enum SeedStream : std::uint64_t {
  kStreamSpec = 0,
  kStreamTrainData = 1,
  kStreamUnits = 2,
  kStreamModelInit = 3,
  kStreamTrainLoop = 4,
  kStreamEvalPairs = 5,
  kStreamHsic = 6,
  kStreamLipschitz = 7,
};

genproc::GenerativeSpec spec_from_config(const ExperimentConfig& cfg);

}  // namespace icae::cli
