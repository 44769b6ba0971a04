#include "icae/io/model_io.hpp"

#include "icae/io/binary.hpp"

namespace icae::io {

namespace {

constexpr char kNetMagic[4] = {'I', 'C', 'A', 'M'};
constexpr char kUnitsMagic[4] = {'I', 'C', 'A', 'U'};
constexpr char kModelMagic[4] = {'I', 'C', 'A', 'P'};
constexpr std::uint16_t kVersion = 1;

void write_net_block(BinaryWriter& out, const numkit::DenseNet& net) {
  out.magic(kNetMagic);
  out.u16(kVersion);
  out.u16(static_cast<std::uint16_t>(net.activation));
  out.u32(static_cast<std::uint32_t>(net.dims.size()));
  for (std::size_t d : net.dims) out.u32(static_cast<std::uint32_t>(d));
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    for (double v : net.weights[i].data()) out.f32(static_cast<float>(v));
    for (double v : net.biases[i]) out.f32(static_cast<float>(v));
  }
}

numkit::DenseNet read_net_block(BinaryReader& in) {
  in.expect_magic(kNetMagic, "net");
  const std::uint16_t version = in.u16();
  if (version != kVersion) {
    throw IoError("net: unsupported version " + std::to_string(version) + " in " + in.path());
  }
  const std::uint16_t act = in.u16();
  if (act > 2) throw IoError("net: unknown activation code " + std::to_string(act));
  numkit::DenseNet net;
  net.activation = static_cast<numkit::Activation>(act);
  const std::uint32_t dim_count = in.u32();
  if (dim_count < 2) throw IoError("net: fewer than two dims in " + in.path());
  net.dims.resize(dim_count);
  for (auto& d : net.dims) d = in.u32();
  for (std::size_t i = 0; i + 1 < dim_count; ++i) {
    numkit::Matrix w(net.dims[i + 1], net.dims[i]);
    for (double& v : w.data()) v = static_cast<double>(in.f32());
    net.weights.push_back(std::move(w));
    numkit::Vec b(net.dims[i + 1]);
    for (double& v : b) v = static_cast<double>(in.f32());
    net.biases.push_back(std::move(b));
  }
  numkit::validate_net(net);
  return net;
}

}  // namespace

void write_net(const numkit::DenseNet& net, const std::string& path) {
  numkit::validate_net(net);
  BinaryWriter out(path);
  write_net_block(out, net);
  out.close();
}

numkit::DenseNet read_net(const std::string& path) {
  BinaryReader in(path);
  numkit::DenseNet net = read_net_block(in);
  if (!in.at_eof()) throw IoError("net: trailing bytes in " + path);
  return net;
}

void write_units(const units::UnitModel& model, const std::string& path) {
  model.validate();
  BinaryWriter out(path);
  out.magic(kUnitsMagic);
  out.u16(kVersion);
  out.u32(static_cast<std::uint32_t>(model.k));
  out.u32(static_cast<std::uint32_t>(model.centroids.cols()));
  out.u32(model.ref_cond);
  for (double v : model.centroids.data()) out.f32(static_cast<float>(v));
  for (double v : model.prior_hist) out.f64(v);
  out.close();
}

units::UnitModel read_units(const std::string& path) {
  BinaryReader in(path);
  in.expect_magic(kUnitsMagic, "units");
  const std::uint16_t version = in.u16();
  if (version != kVersion) {
    throw IoError("units: unsupported version " + std::to_string(version) + " in " + path);
  }
  units::UnitModel model;
  model.k = in.u32();
  const std::uint32_t d_x = in.u32();
  model.ref_cond = in.u32();
  model.centroids = numkit::Matrix(model.k, d_x);
  for (double& v : model.centroids.data()) v = static_cast<double>(in.f32());
  model.prior_hist.resize(model.k);
  for (double& v : model.prior_hist) v = in.f64();
  if (!in.at_eof()) throw IoError("units: trailing bytes in " + path);
  model.dist_matrix = units::distance_matrix(model.prior_hist);
  model.validate();
  return model;
}

void write_model(const IcaeModel& model, const std::string& path) {
  model.validate();
  BinaryWriter out(path);
  out.magic(kModelMagic);
  out.u16(kVersion);
  out.u32(static_cast<std::uint32_t>(model.d_latent));
  out.u32(static_cast<std::uint32_t>(model.label_count));
  out.f64(model.label_scale.offset);
  out.f64(model.label_scale.scale);
  write_net_block(out, model.encoder);
  write_net_block(out, model.decoder);
  out.close();
}

IcaeModel read_model(const std::string& path) {
  BinaryReader in(path);
  in.expect_magic(kModelMagic, "model");
  const std::uint16_t version = in.u16();
  if (version != kVersion) {
    throw IoError("model: unsupported version " + std::to_string(version) + " in " + path);
  }
  IcaeModel model;
  model.d_latent = in.u32();
  model.label_count = in.u32();
  model.label_scale.offset = in.f64();
  model.label_scale.scale = in.f64();
  model.encoder = read_net_block(in);
  model.decoder = read_net_block(in);
  if (!in.at_eof()) throw IoError("model: trailing bytes in " + path);
  model.validate();
  return model;
}

}  // namespace icae::io
