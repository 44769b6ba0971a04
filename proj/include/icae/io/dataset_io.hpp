#pragma once

#include <string>

#include "icae/genproc/dataset.hpp"

namespace icae::io {

using genproc::FrameDataset;

// FrameDataset container: magic "ICAE", u16 version, u16 flags
// (bit0 true_s, bit1 proxy_s, bit2 cond_id), u32 d_x, u32 d_c, u64 N, then
// per record d_x + d_c little-endian f32 followed by the optional u32
// columns in flag order.
void write_dataset(const FrameDataset& ds, const std::string& path);
FrameDataset read_dataset(const std::string& path);

// CSV with header x0..x{d_x-1}, c0..c{d_c-1}, then whichever of cond_id,
// true_s, proxy_s are present.
void write_dataset_csv(const FrameDataset& ds, const std::string& path);
FrameDataset read_dataset_csv(const std::string& path);

enum class DatasetFormat : std::uint8_t { kBinary = 0, kCsv = 1 };

// Loads and validates an externally produced dataset. Non-zero d_x/d_c act
// as required dimensions.
FrameDataset ingest_external(const std::string& path, std::size_t d_x, std::size_t d_c,
                             DatasetFormat format);

}  // namespace icae::io
