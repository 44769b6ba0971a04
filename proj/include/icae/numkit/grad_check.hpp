#pragma once

#include <functional>
#include <string>

#include "icae/numkit/net.hpp"

namespace icae::numkit {

// Scalar loss over the network output, returning the loss value and its
// gradient with respect to the output.
struct LossProbe {
  std::function<double(std::span<const double>)> value;
  std::function<Vec(std::span<const double>)> gradient;
};

// Mean-squared-error probe against a fixed target, 0.5 * ||y - t||^2.
LossProbe quadratic_probe(Vec target);

struct GradCheckReport {
  double max_rel_error = 0.0;
  bool pass = false;
  std::string worst_param;  // "layer i weights (r, c)" or "layer i bias (r)"
};

// Compares analytic parameter gradients of sum_x probe(forward(net, x))
// against central finite differences (step h) on every parameter.
// Failures are reported, never thrown.
GradCheckReport grad_check(const DenseNet& net, const std::vector<Vec>& inputs,
                           const LossProbe& probe, double tolerance, double h = 1e-5);

}  // namespace icae::numkit
