#pragma once

#include <string>

#include "icae/model.hpp"
#include "icae/units/units.hpp"

namespace icae::io {

// Dense network weights: magic "ICAM", u16 version, u16 activation code,
// u32 dims count, the dims as u32, then per layer row-major weights and
// biases as little-endian f32.
void write_net(const numkit::DenseNet& net, const std::string& path);
numkit::DenseNet read_net(const std::string& path);

// Unit codebook: magic "ICAU", u16 version, u32 k, u32 d_x, u32 ref_cond,
// centroids as f32, prior histogram as f64. The distance matrix is
// recomputed on load, never stored.
void write_units(const units::UnitModel& model, const std::string& path);
units::UnitModel read_units(const std::string& path);

// Trained autoencoder: magic "ICAP", u16 version, u32 d_latent, u32 label
// count, f64 label offset and scale, then the encoder and decoder as two
// embedded network blocks.
void write_model(const IcaeModel& model, const std::string& path);
IcaeModel read_model(const std::string& path);

}  // namespace icae::io
