#include "icae/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "icae/errors.hpp"
#include "icae/numkit/rng.hpp"

namespace icae {

using numkit::AdamState;
using numkit::ForwardTrace;
using numkit::NetGradients;
using numkit::Rng;

void TrainConfig::validate(std::size_t dataset_size) const {
  if (lambda < 0.0) throw ConfigError("train: lambda must be >= 0");
  if (lr <= 0.0) throw ConfigError("train: lr must be positive");
  if (batch_size == 0) throw ConfigError("train: batch_size must be positive");
  if (batch_size > dataset_size) {
    throw ConfigError("train: batch_size " + std::to_string(batch_size) +
                      " exceeds dataset size " + std::to_string(dataset_size));
  }
}

std::vector<EpochStats> train(IcaeModel& model, const genproc::FrameDataset& ds,
                              const TrainConfig& cfg) {
  model.validate();
  ds.validate();
  if (!ds.has_proxy_s()) throw DataError("train: dataset lacks proxy labels");
  if (ds.d_x != model.input_dim() || ds.d_c != model.cond_dim()) {
    throw ShapeError("train: dataset dimensions do not match the model");
  }
  cfg.validate(ds.size());

  const std::size_t n = ds.size();
  const std::size_t d_latent = model.d_latent;
  Rng shuffle_rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  AdamState enc_adam(model.encoder, {.lr = cfg.lr});
  AdamState dec_adam(model.decoder, {.lr = cfg.lr});
  NetGradients enc_grads = numkit::make_zero_gradients(model.encoder);
  NetGradients dec_grads = numkit::make_zero_gradients(model.decoder);

  std::vector<EpochStats> trace;
  trace.reserve(cfg.epochs);
  ForwardTrace enc_fwd, dec_fwd;
  Vec x(ds.d_x), dec_in(d_latent + ds.d_c);
  Vec dec_out_grad(ds.d_x), dec_in_grad(d_latent + ds.d_c), enc_out_grad(d_latent);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) shuffle_rng.shuffle(order);
    double epoch_recon = 0.0, epoch_indep = 0.0;

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t batch = std::min(cfg.batch_size, n - start);
      const double inv_batch = 1.0 / static_cast<double>(batch);
      enc_grads.zero();
      dec_grads.zero();
      double batch_recon = 0.0, batch_indep = 0.0;

      for (std::size_t b = 0; b < batch; ++b) {
        const std::size_t rec = order[start + b];
        const auto xr = ds.x_row(rec);
        for (std::size_t j = 0; j < ds.d_x; ++j) x[j] = xr[j];
        net_forward_cached(model.encoder, x, enc_fwd);

        const Vec& s_hat = enc_fwd.output;
        std::copy(s_hat.begin(), s_hat.end(), dec_in.begin());
        const auto cr = ds.c_row(rec);
        for (std::size_t j = 0; j < ds.d_c; ++j) dec_in[d_latent + j] = cr[j];
        net_forward_cached(model.decoder, dec_in, dec_fwd);

        // Reconstruction term and its gradient at the decoder output.
        double rec_err = 0.0;
        for (std::size_t j = 0; j < ds.d_x; ++j) {
          const double r = dec_fwd.output[j] - x[j];
          rec_err += r * r;
          dec_out_grad[j] = 2.0 * r * inv_batch;
        }
        batch_recon += rec_err;

        dec_in_grad.assign(dec_in_grad.size(), 0.0);
        net_backward_accumulate(model.decoder, dec_fwd, dec_out_grad, dec_grads, &dec_in_grad);

        // Independence term adds directly to the latent gradient.
        const double target = model.label_scale.target(ds.proxy_s[rec]);
        double ind_err = 0.0;
        for (std::size_t j = 0; j < d_latent; ++j) {
          const double d = s_hat[j] - target;
          ind_err += d * d;
          enc_out_grad[j] = dec_in_grad[j] + cfg.lambda * 2.0 * d * inv_batch;
        }
        batch_indep += ind_err;
        net_backward_accumulate(model.encoder, enc_fwd, enc_out_grad, enc_grads, nullptr);
      }

      const double batch_total = (batch_recon + cfg.lambda * batch_indep) * inv_batch;
      if (!std::isfinite(batch_total)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch starting at record " + std::to_string(start));
      }
      epoch_recon += batch_recon;
      epoch_indep += batch_indep;
      enc_adam.step(model.encoder, enc_grads);
      dec_adam.step(model.decoder, dec_grads);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.recon = epoch_recon / static_cast<double>(n);
    stats.indep = epoch_indep / static_cast<double>(n);
    stats.total = stats.recon + cfg.lambda * stats.indep;
    trace.push_back(stats);
  }
  return trace;
}

}  // namespace icae
