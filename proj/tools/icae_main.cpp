#include <CLI11.hpp>

#include <iostream>

#include "icae/cli/pipeline.hpp"
#include "icae/errors.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

int run_stage(const std::string& stage, const Options& opts) {
  using namespace icae;
  try {
    cli::ExperimentConfig cfg =
        opts.config_path.empty() ? cli::ExperimentConfig{} : cli::load_config(opts.config_path);
    if (opts.seed_set) cfg.seed = opts.seed;
    const cli::PipelineOutcome outcome =
        cli::run_pipeline(cfg, cli::StageSelection::parse(stage), opts.out_dir, opts.quiet);
    if (!outcome.checks_passed) {
      for (const std::string& failed : outcome.failed_checks) {
        std::cerr << "check failed: " << failed << "\n";
      }
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional autoencoder conversion pipeline on synthetic generative processes"};
  app.require_subcommand(1);

  Options opts;
  app.add_option("--config", opts.config_path, "Experiment config file (key = value lines)");
  app.add_option("--out", opts.out_dir, "Output directory for artifacts and reports");
  app.add_option("--seed", opts.seed, "Override the config seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  app.add_flag("--quiet", opts.quiet, "Suppress progress output");

  std::string chosen;
  for (const auto& name : {"gen", "units", "train", "convert", "verify", "all"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->fallthrough();
    sub->callback([&chosen, name] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run_stage(chosen, opts);
}
