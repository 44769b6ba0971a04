#pragma once

#include <cstdint>
#include <span>

#include "icae/numkit/net.hpp"

namespace icae {

using numkit::Vec;

// Anything that encodes observations to a latent and decodes a latent plus
// condition back to observation space. Implemented by the trained network
// model and by oracle test doubles.
class ConversionModel {
 public:
  virtual ~ConversionModel() = default;
  virtual std::size_t latent_dim() const = 0;
  virtual Vec encode(std::span<const double> x) const = 0;
  virtual Vec decode(std::span<const double> s_hat, std::span<const double> c) const = 0;

  // Definitional composition: decode(encode(x), c_tgt).
  Vec convert(std::span<const double> x, std::span<const double> c_tgt) const {
    const Vec s_hat = encode(x);
    return decode(s_hat, c_tgt);
  }
};

// Strictly monotone affine map from a proxy label index to its regression
// target: target(k) = (k - offset) * scale.
struct LabelScale {
  double offset = 0.0;
  double scale = 1.0;

  double target(std::uint32_t label) const {
    return (static_cast<double>(label) - offset) * scale;
  }
};

// Centers label targets near zero at O(1) spread: (k - (K+1)/2) / K.
LabelScale make_label_scale(std::size_t label_count);

// Encoder x -> s_hat, decoder (s_hat, c) -> x_hat. The decoder consumes the
// latent concatenated with the condition vector.
struct IcaeModel final : ConversionModel {
  numkit::DenseNet encoder;
  numkit::DenseNet decoder;
  std::size_t d_latent = 1;
  std::size_t label_count = 0;
  LabelScale label_scale;

  std::size_t latent_dim() const override { return d_latent; }
  std::size_t input_dim() const { return encoder.input_dim(); }
  std::size_t cond_dim() const { return decoder.input_dim() - d_latent; }

  Vec encode(std::span<const double> x) const override;
  Vec decode(std::span<const double> s_hat, std::span<const double> c) const override;

  // Latent target for a proxy label, replicated across latent dimensions.
  Vec latent_target(std::uint32_t label) const;

  // Throws on inconsistent encoder/decoder dimensions.
  void validate() const;
};

IcaeModel make_icae_model(std::size_t d_x, std::size_t d_c, std::size_t d_latent,
                          const std::vector<std::size_t>& hidden_dims, std::size_t label_count,
                          numkit::Activation activation, std::uint64_t seed);

struct LossValue {
  double total = 0.0;
  double recon = 0.0;
  double indep = 0.0;
};

// Batch means of the squared reconstruction residual and the squared
// latent-to-target distance; total = recon + lambda * indep.
struct LossBatch {
  std::span<const Vec> xs;
  std::span<const Vec> cs;
  std::span<const std::uint32_t> proxy_labels;
};

LossValue loss_eval(const ConversionModel& model, const LabelScale& scale, const LossBatch& batch,
                    double lambda);

}  // namespace icae
