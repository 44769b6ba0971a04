#include "icae/cli/pipeline.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include "icae/errors.hpp"
#include "icae/indep/hsic.hpp"
#include "icae/io/dataset_io.hpp"
#include "icae/io/model_io.hpp"
#include "icae/numkit/rng.hpp"
#include "icae/train.hpp"
#include "icae/verify/checks.hpp"

namespace icae::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using genproc::FrameDataset;
using genproc::GenerativeSpec;
using numkit::split_seed;

StageSelection StageSelection::parse(const std::string& name) {
  StageSelection s;
  if (name == "all") return all();
  if (name == "gen") s.gen = true;
  else if (name == "units") s.units = true;
  else if (name == "train") s.train = true;
  else if (name == "convert") s.convert = true;
  else if (name == "verify") s.verify = true;
  else throw ConfigError("unknown stage '" + name + "'");
  return s;
}

GenerativeSpec spec_from_config(const ExperimentConfig& cfg) {
  genproc::SpecOptions opts;
  opts.prior_ratio = cfg.prior_ratio;
  opts.alpha = cfg.alpha;
  return genproc::make_spec(cfg.k_s, cfg.k_c, cfg.d_u, cfg.d_c, cfg.mixing,
                            split_seed(cfg.seed, kStreamSpec), opts);
}

namespace {

// Removes a stage's partial outputs when the stage throws.
class StageGuard {
 public:
  ~StageGuard() {
    for (const std::string& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
  std::string track(std::string path) {
    paths_.push_back(path);
    return path;
  }
  void commit() { paths_.clear(); }

 private:
  std::vector<std::string> paths_;
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double clamp_finite(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? 1e300 : -1e300;
}

struct Paths {
  std::string dataset, dataset_units, units_model, model, loss_trace, conversions;
  std::string asymmetry, hsic, error_bound, pair_errors, t_consistency, injectivity;

  explicit Paths(const std::string& out) {
    const fs::path dir(out);
    dataset = (dir / "dataset.icae").string();
    dataset_units = (dir / "dataset_units.icae").string();
    units_model = (dir / "units.icau").string();
    model = (dir / "model.icap").string();
    loss_trace = (dir / "loss_trace.csv").string();
    conversions = (dir / "conversions.csv").string();
    asymmetry = (dir / "asymmetry.json").string();
    hsic = (dir / "hsic.json").string();
    error_bound = (dir / "error_bound.json").string();
    pair_errors = (dir / "pair_errors.csv").string();
    t_consistency = (dir / "t_consistency.json").string();
    injectivity = (dir / "injectivity.json").string();
  }
};

FrameDataset load_input_dataset(const ExperimentConfig& cfg, const std::string& fallback) {
  if (!cfg.dataset_path.empty()) {
    const auto format = cfg.dataset_format == "csv" ? io::DatasetFormat::kCsv
                                                    : io::DatasetFormat::kBinary;
    return io::ingest_external(cfg.dataset_path, cfg.d_u + cfg.d_c, cfg.d_c, format);
  }
  return io::read_dataset(fallback);
}

void stage_gen(const ExperimentConfig& cfg, const Paths& paths, bool quiet) {
  StageGuard guard;
  const GenerativeSpec spec = spec_from_config(cfg);
  const FrameDataset ds =
      genproc::sample_dataset(spec, cfg.n_train, split_seed(cfg.seed, kStreamTrainData));
  io::write_dataset(ds, guard.track(paths.dataset));
  guard.commit();
  if (!quiet) {
    std::cout << "[gen] wrote " << paths.dataset << " (n=" << ds.size() << ", d_x=" << ds.d_x
              << ", d_c=" << ds.d_c << ")\n";
  }
}

void stage_units(const ExperimentConfig& cfg, const Paths& paths, bool quiet,
                 PipelineOutcome& outcome) {
  StageGuard guard;
  FrameDataset ds = load_input_dataset(cfg, paths.dataset);
  const units::UnitModel model =
      units::build_proxy(ds, cfg.k_units, cfg.ref_cond_policy, split_seed(cfg.seed, kStreamUnits));
  io::write_units(model, guard.track(paths.units_model));
  io::write_dataset(ds, guard.track(paths.dataset_units));

  const units::AsymmetryReport asym = units::asymmetry_check(model, cfg.gap_tol);
  json asym_json = {
      {"report", "asymmetry"},
      {"seed", cfg.seed},
      {"k", model.k},
      {"ref_cond", model.ref_cond},
      {"gap_tol", cfg.gap_tol},
      {"min_off_diagonal", asym.min_off_diagonal},
      {"max_diagonal", asym.max_diagonal},
      {"near_tie_count", asym.near_tie_count},
      {"pass", asym.pass},
  };
  write_json_file(guard.track(paths.asymmetry), asym_json);
  if (!asym.pass) outcome.failed_checks.push_back("asymmetry");

  // HSIC diagnostics on a seeded subsample: the proxy must look independent
  // of the condition while the raw signal must not.
  const std::size_t n_sub = std::min(cfg.hsic_n, ds.size());
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), 0);
  numkit::Rng rng(split_seed(cfg.seed, kStreamHsic));
  rng.shuffle(idx);
  idx.resize(n_sub);

  numkit::Matrix xs(n_sub, ds.d_x);
  std::vector<std::uint32_t> proxy(n_sub), cond(n_sub);
  for (std::size_t i = 0; i < n_sub; ++i) {
    const auto row = ds.x_row(idx[i]);
    for (std::size_t j = 0; j < ds.d_x; ++j) xs(i, j) = row[j];
    proxy[i] = ds.proxy_s[idx[i]];
    cond[i] = ds.cond_id[idx[i]];
  }
  const numkit::Matrix proxy_m = indep::samples_from_labels(proxy);
  const numkit::Matrix cond_m = indep::samples_from_labels(cond);
  const auto proxy_test = indep::hsic_permutation_test(
      proxy_m, cond_m, indep::Kernel::delta(), indep::Kernel::delta(), cfg.n_perm,
      split_seed(cfg.seed, kStreamHsic) + 1);
  const auto x_test = indep::hsic_permutation_test(
      xs, cond_m, indep::Kernel::rbf(), indep::Kernel::delta(), cfg.n_perm,
      split_seed(cfg.seed, kStreamHsic) + 2);

  const bool proxy_pass = proxy_test.p_value > cfg.hsic_alpha;
  const bool x_pass = x_test.p_value <= cfg.hsic_alpha;
  auto test_json = [](const indep::HsicTestResult& r, bool pass) {
    return json{{"statistic", r.statistic}, {"p_value", r.p_value},   {"n", r.n},
                {"n_perm", r.n_perm},       {"seed", r.seed},         {"kernel_a", r.kernel_a},
                {"kernel_b", r.kernel_b},   {"pass", pass}};
  };
  json hsic_json = {
      {"report", "hsic"},
      {"seed", cfg.seed},
      {"alpha", cfg.hsic_alpha},
      {"proxy_vs_cond", test_json(proxy_test, proxy_pass)},
      {"x_vs_cond", test_json(x_test, x_pass)},
  };
  write_json_file(guard.track(paths.hsic), hsic_json);
  if (!proxy_pass) outcome.failed_checks.push_back("hsic proxy_vs_cond");
  if (!x_pass) outcome.failed_checks.push_back("hsic x_vs_cond");

  guard.commit();
  if (!quiet) {
    std::cout << "[units] k=" << model.k << " ref_cond=" << model.ref_cond
              << " min_offdiag=" << asym.min_off_diagonal
              << " proxy_p=" << proxy_test.p_value << " x_p=" << x_test.p_value << "\n";
  }
}

void stage_train(const ExperimentConfig& cfg, const Paths& paths, bool quiet) {
  StageGuard guard;
  FrameDataset ds = load_input_dataset(cfg, paths.dataset_units);
  IcaeModel model = make_icae_model(ds.d_x, ds.d_c, cfg.d_latent, cfg.hidden_dims, cfg.k_units,
                                    cfg.activation, split_seed(cfg.seed, kStreamModelInit));
  TrainConfig tc;
  tc.lambda = cfg.lambda;
  tc.lr = cfg.lr;
  tc.batch_size = cfg.batch_size;
  tc.epochs = cfg.epochs;
  tc.seed = split_seed(cfg.seed, kStreamTrainLoop);
  tc.shuffle = cfg.shuffle;
  const std::vector<EpochStats> trace = train(model, ds, tc);

  io::write_model(model, guard.track(paths.model));
  std::ofstream out(guard.track(paths.loss_trace), std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + paths.loss_trace);
  out << "epoch,recon,indep,total\n";
  for (const EpochStats& e : trace) {
    out << e.epoch << "," << fmt(e.recon) << "," << fmt(e.indep) << "," << fmt(e.total) << "\n";
  }
  out.close();
  if (!out) throw IoError("write failed: " + paths.loss_trace);
  guard.commit();
  if (!quiet) {
    std::cout << "[train] epochs=" << trace.size();
    if (!trace.empty()) {
      std::cout << " first_total=" << trace.front().total << " final_total=" << trace.back().total;
    }
    std::cout << " wrote " << paths.model << "\n";
  }
}

void stage_convert(const ExperimentConfig& cfg, const Paths& paths, bool quiet) {
  StageGuard guard;
  const GenerativeSpec spec = spec_from_config(cfg);
  const IcaeModel model = io::read_model(paths.model);
  const auto pairs =
      genproc::sample_parallel_pairs(spec, cfg.n_eval_pairs, split_seed(cfg.seed, kStreamEvalPairs));

  std::ofstream out(guard.track(paths.conversions), std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + paths.conversions);
  out << "pair,shared_s,cond_src,cond_tgt,conv_error,baseline_error";
  for (std::size_t j = 0; j < spec.d_x(); ++j) out << ",xhat" << j;
  out << "\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const numkit::Vec converted = model.convert(genproc::to_f64(p.x_src), genproc::to_f64(p.c_tgt));
    const numkit::Vec x_tgt = genproc::to_f64(p.x_tgt);
    const double conv_err = numkit::squared_distance(converted, x_tgt);
    const double baseline = numkit::squared_distance(genproc::to_f64(p.x_src), x_tgt);
    out << i << "," << p.shared_s << "," << p.cond_src << "," << p.cond_tgt << ","
        << fmt(conv_err) << "," << fmt(baseline);
    for (double v : converted) out << "," << fmt(v);
    out << "\n";
  }
  out.close();
  if (!out) throw IoError("write failed: " + paths.conversions);
  guard.commit();
  if (!quiet) {
    std::cout << "[convert] wrote " << paths.conversions << " (" << pairs.size() << " pairs)\n";
  }
}

void stage_verify(const ExperimentConfig& cfg, const Paths& paths, bool quiet,
                  PipelineOutcome& outcome) {
  StageGuard guard;
  const GenerativeSpec spec = spec_from_config(cfg);
  const IcaeModel model = io::read_model(paths.model);
  const units::UnitModel unit_model = io::read_units(paths.units_model);
  const auto pairs =
      genproc::sample_parallel_pairs(spec, cfg.n_eval_pairs, split_seed(cfg.seed, kStreamEvalPairs));

  const verify::ErrorBoundReport eb = verify::check_error_bound(
      model, pairs, split_seed(cfg.seed, kStreamLipschitz), cfg.lipschitz_pairs, cfg.denom_floor);
  json eb_json = {
      {"report", "error_bound"},
      {"seed", cfg.seed},
      {"pairs", eb.pair_count},
      {"epsilon", eb.epsilon},
      {"epsilon_sq", eb.epsilon_sq},
      {"epsilon_prime", eb.epsilon_prime},
      {"lipschitz_hat", eb.lipschitz_hat},
      {"bound", eb.bound},
      {"holds_fraction", eb.holds_fraction},
      {"conv_error_median", eb.conv_error_median},
      {"recon_sq_median", eb.recon_sq_median},
      {"baseline_median", eb.baseline_median},
      {"recon_rmse", eb.recon_rmse},
  };
  write_json_file(guard.track(paths.error_bound), eb_json);
  if (eb.holds_fraction != 1.0) outcome.failed_checks.push_back("error_bound holds_fraction");

  std::ofstream pe(guard.track(paths.pair_errors), std::ios::trunc);
  if (!pe) throw IoError("cannot open for writing: " + paths.pair_errors);
  pe << "pair,conv_error,bound,holds\n";
  for (std::size_t i = 0; i < eb.conv_errors.size(); ++i) {
    pe << i << "," << fmt(eb.conv_errors[i]) << "," << fmt(eb.bound) << ","
       << (eb.conv_errors[i] <= eb.bound ? 1 : 0) << "\n";
  }
  pe.close();
  if (!pe) throw IoError("write failed: " + paths.pair_errors);

  const verify::InjectivityReport inj =
      verify::check_injectivity(model, spec, unit_model.ref_cond, cfg.margin_tol);
  json inj_json = {
      {"report", "injectivity"}, {"seed", cfg.seed},
      {"ref_cond", unit_model.ref_cond},  {"margin_tol", inj.margin_tol},
      {"min_margin", inj.min_margin},     {"pass", inj.pass},
  };
  write_json_file(guard.track(paths.injectivity), inj_json);
  if (!inj.pass) outcome.failed_checks.push_back("injectivity");

  const verify::TConsistencyReport tc = verify::check_t_consistency(model, spec);
  const bool tc_pass = tc.spread_ratio <= cfg.spread_ratio_max;
  json tc_json = {
      {"report", "t_consistency"},
      {"seed", cfg.seed},
      {"median_spread", tc.median_spread},
      {"median_gap", tc.median_gap},
      {"spread_ratio", clamp_finite(tc.spread_ratio)},
      {"spread_ratio_max", cfg.spread_ratio_max},
      {"cross_cond_spread", tc.cross_cond_spread},
      {"inter_s_gap", tc.inter_s_gap},
      {"pass", tc_pass},
  };
  write_json_file(guard.track(paths.t_consistency), tc_json);
  if (!tc_pass) outcome.failed_checks.push_back("t_consistency spread_ratio");

  guard.commit();
  if (!quiet) {
    std::cout << "[verify] holds_fraction=" << eb.holds_fraction
              << " min_margin=" << inj.min_margin << " spread_ratio=" << tc.spread_ratio << "\n";
  }
}

}  // namespace

PipelineOutcome run_pipeline(const ExperimentConfig& cfg, const StageSelection& stages,
                             const std::string& out_dir, bool quiet) {
  cfg.validate();
  fs::create_directories(out_dir);
  const Paths paths(out_dir);
  PipelineOutcome outcome;
  if (stages.gen) stage_gen(cfg, paths, quiet);
  if (stages.units) stage_units(cfg, paths, quiet, outcome);
  if (stages.train) stage_train(cfg, paths, quiet);
  if (stages.convert) stage_convert(cfg, paths, quiet);
  if (stages.verify) stage_verify(cfg, paths, quiet, outcome);
  outcome.checks_passed = outcome.failed_checks.empty();
  return outcome;
}

}  // namespace icae::cli
