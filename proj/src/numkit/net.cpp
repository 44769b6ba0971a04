#include "icae/numkit/net.hpp"

#include <cmath>
#include <string>

#include "icae/errors.hpp"

namespace icae::numkit {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kIdentity: return "identity";
  }
  return "unknown";
}

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) n += weights[i].size() + biases[i].size();
  return n;
}

DenseNet make_dense_net(std::vector<std::size_t> dims, Activation activation, Rng& rng) {
  if (dims.size() < 2) throw ConfigError("dense net needs at least input and output dims");
  for (std::size_t d : dims) {
    if (d == 0) throw ConfigError("dense net dims must be positive");
  }
  DenseNet net;
  net.dims = std::move(dims);
  net.activation = activation;
  for (std::size_t i = 0; i + 1 < net.dims.size(); ++i) {
    const std::size_t fan_in = net.dims[i];
    const std::size_t fan_out = net.dims[i + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_out, fan_in);
    for (double& v : w.data()) v = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(fan_out, 0.0);
  }
  return net;
}

void validate_net(const DenseNet& net) {
  if (net.dims.size() < 2 || net.weights.size() != net.dims.size() - 1 ||
      net.biases.size() != net.weights.size()) {
    throw ShapeError("dense net: layer bookkeeping inconsistent");
  }
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    if (net.weights[i].rows() != net.dims[i + 1] || net.weights[i].cols() != net.dims[i]) {
      throw ShapeError("dense net: weight matrix " + std::to_string(i) + " has shape " +
                       std::to_string(net.weights[i].rows()) + "x" +
                       std::to_string(net.weights[i].cols()) + ", expected " +
                       std::to_string(net.dims[i + 1]) + "x" + std::to_string(net.dims[i]));
    }
    if (net.biases[i].size() != net.dims[i + 1]) {
      throw ShapeError("dense net: bias " + std::to_string(i) + " has length " +
                       std::to_string(net.biases[i].size()) + ", expected " +
                       std::to_string(net.dims[i + 1]));
    }
    for (double v : net.weights[i].data()) {
      if (!std::isfinite(v)) throw NumericError("dense net: non-finite weight in layer " + std::to_string(i));
    }
    for (double v : net.biases[i]) {
      if (!std::isfinite(v)) throw NumericError("dense net: non-finite bias in layer " + std::to_string(i));
    }
  }
}

namespace {

inline double activate(Activation a, double z) {
  switch (a) {
    case Activation::kTanh: return std::tanh(z);
    case Activation::kRelu: return z > 0.0 ? z : 0.0;
    case Activation::kIdentity: return z;
  }
  return z;
}

// Derivative expressed in terms of the post-activation value.
inline double activate_derivative(Activation a, double post) {
  switch (a) {
    case Activation::kTanh: return 1.0 - post * post;
    case Activation::kRelu: return post > 0.0 ? 1.0 : 0.0;
    case Activation::kIdentity: return 1.0;
  }
  return 1.0;
}

}  // namespace

void net_forward_cached(const DenseNet& net, std::span<const double> x, ForwardTrace& trace) {
  if (x.size() != net.input_dim()) {
    throw ShapeError("net_forward: input length " + std::to_string(x.size()) +
                     " does not match dims[0] = " + std::to_string(net.input_dim()));
  }
  const std::size_t layers = net.layer_count();
  trace.inputs.resize(layers);
  trace.inputs[0].assign(x.begin(), x.end());
  for (std::size_t i = 0; i < layers; ++i) {
    const Matrix& w = net.weights[i];
    const Vec& b = net.biases[i];
    Vec& out = (i + 1 < layers) ? trace.inputs[i + 1] : trace.output;
    out.resize(w.rows());
    const bool hidden = i + 1 < layers;
    const Vec& in = trace.inputs[i];
    for (std::size_t r = 0; r < w.rows(); ++r) {
      const double z = dot(w.row(r), in) + b[r];
      out[r] = hidden ? activate(net.activation, z) : z;
    }
  }
}

Vec net_forward(const DenseNet& net, std::span<const double> x) {
  ForwardTrace trace;
  net_forward_cached(net, x, trace);
  return trace.output;
}

void NetGradients::zero() {
  for (Matrix& m : weights) m.fill(0.0);
  for (Vec& b : biases) b.assign(b.size(), 0.0);
  input.assign(input.size(), 0.0);
}

void NetGradients::scale(double s) {
  for (Matrix& m : weights)
    for (double& v : m.data()) v *= s;
  for (Vec& b : biases)
    for (double& v : b) v *= s;
  for (double& v : input) v *= s;
}

NetGradients make_zero_gradients(const DenseNet& net) {
  NetGradients g;
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    g.weights.emplace_back(net.dims[i + 1], net.dims[i]);
    g.biases.emplace_back(net.dims[i + 1], 0.0);
  }
  g.input.assign(net.input_dim(), 0.0);
  return g;
}

void net_backward_accumulate(const DenseNet& net, const ForwardTrace& trace,
                             std::span<const double> grad_out, NetGradients& acc,
                             Vec* input_grad) {
  if (grad_out.size() != net.output_dim()) {
    throw ShapeError("net_backward: grad_out length " + std::to_string(grad_out.size()) +
                     " does not match dims[last] = " + std::to_string(net.output_dim()));
  }
  Vec delta(grad_out.begin(), grad_out.end());
  Vec next;
  for (std::size_t ii = net.layer_count(); ii-- > 0;) {
    const Matrix& w = net.weights[ii];
    const Vec& in = trace.inputs[ii];
    Matrix& gw = acc.weights[ii];
    Vec& gb = acc.biases[ii];
    for (std::size_t r = 0; r < w.rows(); ++r) {
      const double d = delta[r];
      gb[r] += d;
      std::span<double> grow = gw.row(r);
      for (std::size_t c = 0; c < w.cols(); ++c) grow[c] += d * in[c];
    }
    // Propagate W^T delta; apply the activation derivative except at the
    // raw input.
    if (ii == 0 && input_grad == nullptr) break;
    next.assign(w.cols(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
      const double d = delta[r];
      std::span<const double> wrow = w.row(r);
      for (std::size_t c = 0; c < w.cols(); ++c) next[c] += d * wrow[c];
    }
    if (ii == 0) {
      for (std::size_t c = 0; c < next.size(); ++c) (*input_grad)[c] += next[c];
      break;
    }
    for (std::size_t c = 0; c < next.size(); ++c) {
      next[c] *= activate_derivative(net.activation, in[c]);
    }
    delta.swap(next);
  }
}

NetGradients net_backward(const DenseNet& net, std::span<const double> x,
                          std::span<const double> grad_out) {
  ForwardTrace trace;
  net_forward_cached(net, x, trace);
  NetGradients g = make_zero_gradients(net);
  net_backward_accumulate(net, trace, grad_out, g, &g.input);
  return g;
}

}  // namespace icae::numkit
