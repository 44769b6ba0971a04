#include "icae/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "icae/errors.hpp"

namespace icae::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::uint64_t parse_u64(const std::string& v, std::size_t line, const std::string& key) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    fail(line, key + " expects an unsigned integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const std::string& v, std::size_t line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    fail(line, key + " expects a real number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, std::size_t line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(line, key + " expects true or false, got '" + v + "'");
}

std::vector<std::size_t> parse_dims(const std::string& v, std::size_t line,
                                    const std::string& key) {
  std::vector<std::size_t> dims;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) fail(line, key + ": empty entry in list '" + v + "'");
    dims.push_back(static_cast<std::size_t>(parse_u64(part, line, key)));
  }
  if (dims.empty()) fail(line, key + ": list must not be empty");
  return dims;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  require(k_s >= 2, "k_s must be >= 2");
  require(k_c >= 2, "k_c must be >= 2");
  require(d_u >= 1 && d_c >= 1, "d_u and d_c must be >= 1");
  require(alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0, 1)");
  require(prior_ratio > 0.0 && prior_ratio < 1.0, "prior_ratio must lie in (0, 1)");
  require(n_train >= 1, "n_train must be >= 1");
  require(n_eval_pairs >= 1, "n_eval_pairs must be >= 1");
  require(k_units >= 1, "k_units must be >= 1");
  require(d_latent >= 1, "d_latent must be >= 1");
  require(!hidden_dims.empty(), "hidden_dims must not be empty");
  for (std::size_t d : hidden_dims) require(d >= 1, "hidden_dims entries must be >= 1");
  require(lambda >= 0.0, "lambda must be >= 0");
  require(lr > 0.0, "lr must be positive");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(batch_size <= n_train, "batch_size must not exceed n_train");
  require(n_perm >= 99, "n_perm must be >= 99");
  require(hsic_n >= 2, "hsic_n must be >= 2");
  require(hsic_alpha > 0.0 && hsic_alpha < 1.0, "hsic_alpha must lie in (0, 1)");
  require(gap_tol > 0.0, "gap_tol must be positive");
  require(margin_tol > 0.0, "margin_tol must be positive");
  require(spread_ratio_max > 0.0, "spread_ratio_max must be positive");
  require(denom_floor > 0.0, "denom_floor must be positive");
  require(lipschitz_pairs >= 1, "lipschitz_pairs must be >= 1");
  require(dataset_format == "binary" || dataset_format == "csv",
          "dataset_format must be binary or csv");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream in(text);
  std::string raw;
  std::size_t line_no = 0;

  using Setter = std::function<void(const std::string&, std::size_t)>;
  const std::map<std::string, Setter> setters = {
      {"k_s", [&](const std::string& v, std::size_t l) { cfg.k_s = parse_u64(v, l, "k_s"); }},
      {"k_c", [&](const std::string& v, std::size_t l) { cfg.k_c = parse_u64(v, l, "k_c"); }},
      {"d_u", [&](const std::string& v, std::size_t l) { cfg.d_u = parse_u64(v, l, "d_u"); }},
      {"d_c", [&](const std::string& v, std::size_t l) { cfg.d_c = parse_u64(v, l, "d_c"); }},
      {"mixing",
       [&](const std::string& v, std::size_t l) {
         if (v == "affine") cfg.mixing = genproc::Mixing::kAffine;
         else if (v == "smooth") cfg.mixing = genproc::Mixing::kSmooth;
         else fail(l, "mixing must be affine or smooth, got '" + v + "'");
       }},
      {"alpha", [&](const std::string& v, std::size_t l) { cfg.alpha = parse_double(v, l, "alpha"); }},
      {"prior_ratio",
       [&](const std::string& v, std::size_t l) { cfg.prior_ratio = parse_double(v, l, "prior_ratio"); }},
      {"n_train", [&](const std::string& v, std::size_t l) { cfg.n_train = parse_u64(v, l, "n_train"); }},
      {"n_eval_pairs",
       [&](const std::string& v, std::size_t l) { cfg.n_eval_pairs = parse_u64(v, l, "n_eval_pairs"); }},
      {"k_units", [&](const std::string& v, std::size_t l) { cfg.k_units = parse_u64(v, l, "k_units"); }},
      {"ref_cond_policy",
       [&](const std::string& v, std::size_t l) {
         if (v == "most_records") cfg.ref_cond_policy = units::RefCondPolicy::kMostRecords;
         else if (v == "lowest_id") cfg.ref_cond_policy = units::RefCondPolicy::kLowestId;
         else fail(l, "ref_cond_policy must be most_records or lowest_id, got '" + v + "'");
       }},
      {"d_latent", [&](const std::string& v, std::size_t l) { cfg.d_latent = parse_u64(v, l, "d_latent"); }},
      {"hidden_dims",
       [&](const std::string& v, std::size_t l) { cfg.hidden_dims = parse_dims(v, l, "hidden_dims"); }},
      {"activation",
       [&](const std::string& v, std::size_t l) {
         if (v == "tanh") cfg.activation = numkit::Activation::kTanh;
         else if (v == "relu") cfg.activation = numkit::Activation::kRelu;
         else if (v == "identity") cfg.activation = numkit::Activation::kIdentity;
         else fail(l, "activation must be tanh, relu, or identity, got '" + v + "'");
       }},
      {"lambda",
       [&](const std::string& v, std::size_t l) {
         cfg.lambda = parse_double(v, l, "lambda");
         if (cfg.lambda < 0.0) fail(l, "lambda must be >= 0");
       }},
      {"lr", [&](const std::string& v, std::size_t l) { cfg.lr = parse_double(v, l, "lr"); }},
      {"batch_size",
       [&](const std::string& v, std::size_t l) { cfg.batch_size = parse_u64(v, l, "batch_size"); }},
      {"epochs", [&](const std::string& v, std::size_t l) { cfg.epochs = parse_u64(v, l, "epochs"); }},
      {"shuffle", [&](const std::string& v, std::size_t l) { cfg.shuffle = parse_bool(v, l, "shuffle"); }},
      {"seed", [&](const std::string& v, std::size_t l) { cfg.seed = parse_u64(v, l, "seed"); }},
      {"n_perm", [&](const std::string& v, std::size_t l) { cfg.n_perm = parse_u64(v, l, "n_perm"); }},
      {"hsic_n", [&](const std::string& v, std::size_t l) { cfg.hsic_n = parse_u64(v, l, "hsic_n"); }},
      {"hsic_alpha",
       [&](const std::string& v, std::size_t l) { cfg.hsic_alpha = parse_double(v, l, "hsic_alpha"); }},
      {"gap_tol", [&](const std::string& v, std::size_t l) { cfg.gap_tol = parse_double(v, l, "gap_tol"); }},
      {"margin_tol",
       [&](const std::string& v, std::size_t l) { cfg.margin_tol = parse_double(v, l, "margin_tol"); }},
      {"spread_ratio_max",
       [&](const std::string& v, std::size_t l) {
         cfg.spread_ratio_max = parse_double(v, l, "spread_ratio_max");
       }},
      {"denom_floor",
       [&](const std::string& v, std::size_t l) { cfg.denom_floor = parse_double(v, l, "denom_floor"); }},
      {"lipschitz_pairs",
       [&](const std::string& v, std::size_t l) { cfg.lipschitz_pairs = parse_u64(v, l, "lipschitz_pairs"); }},
      {"dataset_path", [&](const std::string& v, std::size_t) { cfg.dataset_path = v; }},
      {"dataset_format", [&](const std::string& v, std::size_t) { cfg.dataset_format = v; }},
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) fail(line_no, "unknown key '" + key + "'");
    it->second(value, line_no);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "k_s = " << cfg.k_s << "\n";
  out << "k_c = " << cfg.k_c << "\n";
  out << "d_u = " << cfg.d_u << "\n";
  out << "d_c = " << cfg.d_c << "\n";
  out << "mixing = " << genproc::mixing_name(cfg.mixing) << "\n";
  out << "alpha = " << cfg.alpha << "\n";
  out << "prior_ratio = " << cfg.prior_ratio << "\n";
  out << "n_train = " << cfg.n_train << "\n";
  out << "n_eval_pairs = " << cfg.n_eval_pairs << "\n";
  out << "k_units = " << cfg.k_units << "\n";
  out << "ref_cond_policy = "
      << (cfg.ref_cond_policy == units::RefCondPolicy::kMostRecords ? "most_records" : "lowest_id")
      << "\n";
  out << "d_latent = " << cfg.d_latent << "\n";
  out << "hidden_dims = ";
  for (std::size_t i = 0; i < cfg.hidden_dims.size(); ++i) {
    out << (i ? "," : "") << cfg.hidden_dims[i];
  }
  out << "\n";
  out << "activation = " << numkit::activation_name(cfg.activation) << "\n";
  out << "lambda = " << cfg.lambda << "\n";
  out << "lr = " << cfg.lr << "\n";
  out << "batch_size = " << cfg.batch_size << "\n";
  out << "epochs = " << cfg.epochs << "\n";
  out << "shuffle = " << (cfg.shuffle ? "true" : "false") << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "n_perm = " << cfg.n_perm << "\n";
  out << "hsic_n = " << cfg.hsic_n << "\n";
  out << "hsic_alpha = " << cfg.hsic_alpha << "\n";
  out << "gap_tol = " << cfg.gap_tol << "\n";
  out << "margin_tol = " << cfg.margin_tol << "\n";
  out << "spread_ratio_max = " << cfg.spread_ratio_max << "\n";
  out << "denom_floor = " << cfg.denom_floor << "\n";
  out << "lipschitz_pairs = " << cfg.lipschitz_pairs << "\n";
  if (!cfg.dataset_path.empty()) out << "dataset_path = " << cfg.dataset_path << "\n";
  out << "dataset_format = " << cfg.dataset_format << "\n";
  return out.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

}  // namespace icae::cli
