#include "icae/model.hpp"

#include <string>

#include "icae/errors.hpp"

namespace icae {

LabelScale make_label_scale(std::size_t label_count) {
  if (label_count == 0) throw ConfigError("label scale: label count must be positive");
  const double k = static_cast<double>(label_count);
  return {(k + 1.0) / 2.0, 1.0 / k};
}

Vec IcaeModel::encode(std::span<const double> x) const { return numkit::net_forward(encoder, x); }

Vec IcaeModel::decode(std::span<const double> s_hat, std::span<const double> c) const {
  if (s_hat.size() != d_latent) {
    throw ShapeError("decode: latent length " + std::to_string(s_hat.size()) + ", expected " +
                     std::to_string(d_latent));
  }
  Vec joined(d_latent + c.size());
  std::copy(s_hat.begin(), s_hat.end(), joined.begin());
  std::copy(c.begin(), c.end(), joined.begin() + static_cast<std::ptrdiff_t>(d_latent));
  return numkit::net_forward(decoder, joined);
}

Vec IcaeModel::latent_target(std::uint32_t label) const {
  return Vec(d_latent, label_scale.target(label));
}

void IcaeModel::validate() const {
  numkit::validate_net(encoder);
  numkit::validate_net(decoder);
  if (encoder.output_dim() != d_latent) throw ShapeError("icae model: encoder output != d_latent");
  if (decoder.input_dim() <= d_latent) {
    throw ShapeError("icae model: decoder input must exceed d_latent");
  }
  if (decoder.output_dim() != encoder.input_dim()) {
    throw ShapeError("icae model: decoder output != encoder input");
  }
  if (label_scale.scale == 0.0) throw ConfigError("icae model: label scale must be monotone");
}

IcaeModel make_icae_model(std::size_t d_x, std::size_t d_c, std::size_t d_latent,
                          const std::vector<std::size_t>& hidden_dims, std::size_t label_count,
                          numkit::Activation activation, std::uint64_t seed) {
  if (d_x == 0 || d_c == 0 || d_latent == 0) {
    throw ConfigError("icae model: dimensions must be positive");
  }
  numkit::Rng rng(seed);
  std::vector<std::size_t> enc_dims;
  enc_dims.push_back(d_x);
  enc_dims.insert(enc_dims.end(), hidden_dims.begin(), hidden_dims.end());
  enc_dims.push_back(d_latent);
  std::vector<std::size_t> dec_dims;
  dec_dims.push_back(d_latent + d_c);
  dec_dims.insert(dec_dims.end(), hidden_dims.begin(), hidden_dims.end());
  dec_dims.push_back(d_x);

  IcaeModel model;
  model.encoder = numkit::make_dense_net(enc_dims, activation, rng);
  model.decoder = numkit::make_dense_net(dec_dims, activation, rng);
  model.d_latent = d_latent;
  model.label_count = label_count;
  model.label_scale = make_label_scale(label_count);
  return model;
}

LossValue loss_eval(const ConversionModel& model, const LabelScale& scale, const LossBatch& batch,
                    double lambda) {
  if (batch.xs.empty()) throw DataError("loss_eval: empty batch");
  if (batch.proxy_labels.size() != batch.xs.size() || batch.cs.size() != batch.xs.size()) {
    throw DataError("loss_eval: batch requires matching x, c, and proxy label counts");
  }
  LossValue loss;
  const std::size_t d_latent = model.latent_dim();
  for (std::size_t i = 0; i < batch.xs.size(); ++i) {
    const Vec s_hat = model.encode(batch.xs[i]);
    const Vec x_hat = model.decode(s_hat, batch.cs[i]);
    loss.recon += numkit::squared_distance(x_hat, batch.xs[i]);
    const double target = scale.target(batch.proxy_labels[i]);
    double latent_err = 0.0;
    for (std::size_t j = 0; j < d_latent; ++j) {
      const double d = s_hat[j] - target;
      latent_err += d * d;
    }
    loss.indep += latent_err;
  }
  const double n = static_cast<double>(batch.xs.size());
  loss.recon /= n;
  loss.indep /= n;
  loss.total = loss.recon + lambda * loss.indep;
  return loss;
}

}  // namespace icae
