#include "icae/numkit/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "icae/errors.hpp"

namespace icae::numkit {

LossProbe quadratic_probe(Vec target) {
  auto value = [target](std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double d = y[i] - target[i];
      s += d * d;
    }
    return 0.5 * s;
  };
  auto gradient = [target](std::span<const double> y) {
    Vec g(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = y[i] - target[i];
    return g;
  };
  return {value, gradient};
}

namespace {

double total_loss(const DenseNet& net, const std::vector<Vec>& inputs, const LossProbe& probe) {
  double total = 0.0;
  for (const Vec& x : inputs) total += probe.value(net_forward(net, x));
  return total;
}

NetGradients analytic_gradients(const DenseNet& net, const std::vector<Vec>& inputs,
                                const LossProbe& probe) {
  NetGradients acc = make_zero_gradients(net);
  ForwardTrace trace;
  for (const Vec& x : inputs) {
    net_forward_cached(net, x, trace);
    const Vec g = probe.gradient(trace.output);
    net_backward_accumulate(net, trace, g, acc, nullptr);
  }
  return acc;
}

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-4});
  return std::abs(analytic - numeric) / denom;
}

}  // namespace

GradCheckReport grad_check(const DenseNet& net, const std::vector<Vec>& inputs,
                           const LossProbe& probe, double tolerance, double h) {
  if (tolerance <= 0.0) throw ConfigError("grad_check: tolerance must be positive");
  const NetGradients analytic = analytic_gradients(net, inputs, probe);

  DenseNet probe_net = net;
  GradCheckReport report;

  auto check_param = [&](double& param, double analytic_grad, const std::string& name) {
    const double saved = param;
    param = saved + h;
    const double up = total_loss(probe_net, inputs, probe);
    param = saved - h;
    const double down = total_loss(probe_net, inputs, probe);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double err = relative_error(analytic_grad, numeric);
    if (err > report.max_rel_error) {
      report.max_rel_error = err;
      report.worst_param = name;
    }
  };

  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    Matrix& w = probe_net.weights[i];
    for (std::size_t r = 0; r < w.rows(); ++r) {
      for (std::size_t c = 0; c < w.cols(); ++c) {
        check_param(w(r, c), analytic.weights[i](r, c),
                    "layer " + std::to_string(i) + " weights (" + std::to_string(r) + ", " +
                        std::to_string(c) + ")");
      }
    }
    Vec& b = probe_net.biases[i];
    for (std::size_t r = 0; r < b.size(); ++r) {
      check_param(b[r], analytic.biases[i][r],
                  "layer " + std::to_string(i) + " bias (" + std::to_string(r) + ")");
    }
  }
  report.pass = report.max_rel_error <= tolerance;
  return report;
}

}  // namespace icae::numkit
