#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "icae/numkit/matrix.hpp"
#include "icae/numkit/rng.hpp"

namespace icae::numkit {

enum class Activation : std::uint16_t { kTanh = 0, kRelu = 1, kIdentity = 2 };

const char* activation_name(Activation a);

// Fully connected feedforward network. The activation applies to every
// hidden layer; the output layer is always affine.
struct DenseNet {
  std::vector<std::size_t> dims;   // input, hidden..., output
  std::vector<Matrix> weights;     // weights[i] has shape dims[i+1] x dims[i]
  std::vector<Vec> biases;         // biases[i] has length dims[i+1]
  Activation activation = Activation::kTanh;

  std::size_t input_dim() const { return dims.front(); }
  std::size_t output_dim() const { return dims.back(); }
  std::size_t layer_count() const { return weights.size(); }
  std::size_t parameter_count() const;
};

// Glorot-style uniform init, +-sqrt(6 / (fan_in + fan_out)) per layer.
DenseNet make_dense_net(std::vector<std::size_t> dims, Activation activation, Rng& rng);

// Throws ShapeError if parameter shapes do not chain or NumericError on
// non-finite parameters.
void validate_net(const DenseNet& net);

Vec net_forward(const DenseNet& net, std::span<const double> x);

// Gradients of <grad_out, net_forward(net, x)> with respect to every
// parameter and to x.
struct NetGradients {
  std::vector<Matrix> weights;
  std::vector<Vec> biases;
  Vec input;

  void zero();
  void scale(double s);
};

NetGradients make_zero_gradients(const DenseNet& net);

// Per-layer activations retained for the backward pass.
struct ForwardTrace {
  std::vector<Vec> inputs;  // inputs[0] = x, inputs[i] = output of layer i-1
  Vec output;               // final layer output (identity activation)
};

void net_forward_cached(const DenseNet& net, std::span<const double> x, ForwardTrace& trace);

// Accumulates gradients into `acc` (which must have matching shapes).
// When `input_grad` is non-null the gradient with respect to x is added
// into it.
void net_backward_accumulate(const DenseNet& net, const ForwardTrace& trace,
                             std::span<const double> grad_out, NetGradients& acc,
                             Vec* input_grad);

NetGradients net_backward(const DenseNet& net, std::span<const double> x,
                          std::span<const double> grad_out);

}  // namespace icae::numkit
