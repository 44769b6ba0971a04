#include "icae/numkit/adam.hpp"

#include <cmath>
#include <string>

#include "icae/errors.hpp"

namespace icae::numkit {

AdamState::AdamState(const DenseNet& net, AdamConfig cfg) : cfg_(cfg) {
  if (cfg.lr <= 0.0) throw ConfigError("adam: lr must be positive");
  if (cfg.beta1 <= 0.0 || cfg.beta1 >= 1.0 || cfg.beta2 <= 0.0 || cfg.beta2 >= 1.0) {
    throw ConfigError("adam: betas must lie in (0, 1)");
  }
  if (cfg.eps_stab <= 0.0) throw ConfigError("adam: eps_stab must be positive");
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    m_weights_.emplace_back(net.dims[i + 1], net.dims[i]);
    v_weights_.emplace_back(net.dims[i + 1], net.dims[i]);
    m_biases_.emplace_back(net.dims[i + 1], 0.0);
    v_biases_.emplace_back(net.dims[i + 1], 0.0);
  }
}

namespace {

void update_block(std::vector<double>& params, const std::vector<double>& grads,
                  std::vector<double>& m, std::vector<double>& v, const AdamConfig& cfg,
                  double bias1, double bias2, const char* what, std::size_t layer) {
  if (params.size() != grads.size()) {
    throw ShapeError(std::string("adam: gradient shape mismatch in layer ") +
                     std::to_string(layer) + " " + what);
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (!std::isfinite(g)) {
      throw NumericError(std::string("adam: non-finite gradient in layer ") +
                         std::to_string(layer) + " " + what);
    }
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = m[i] / bias1;
    const double v_hat = v[i] / bias2;
    params[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps_stab);
  }
}

}  // namespace

void AdamState::step(DenseNet& net, const NetGradients& grads) {
  if (grads.weights.size() != net.layer_count() || grads.biases.size() != net.layer_count() ||
      m_weights_.size() != net.layer_count()) {
    throw ShapeError("adam: layer count mismatch");
  }
  ++step_count_;
  const double bias1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_count_));
  const double bias2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_count_));
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    update_block(net.weights[i].data(), grads.weights[i].data(), m_weights_[i].data(),
                 v_weights_[i].data(), cfg_, bias1, bias2, "weights", i);
    update_block(net.biases[i], grads.biases[i], m_biases_[i], v_biases_[i], cfg_, bias1, bias2,
                 "biases", i);
  }
}

}  // namespace icae::numkit
