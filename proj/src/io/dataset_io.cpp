#include "icae/io/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "icae/io/binary.hpp"

namespace icae::io {

namespace {

constexpr char kMagic[4] = {'I', 'C', 'A', 'E'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint16_t kFlagTrueS = 1u << 0;
constexpr std::uint16_t kFlagProxyS = 1u << 1;
constexpr std::uint16_t kFlagCondId = 1u << 2;

}  // namespace

void write_dataset(const FrameDataset& ds, const std::string& path) {
  ds.validate();
  BinaryWriter out(path);
  out.magic(kMagic);
  out.u16(kVersion);
  std::uint16_t flags = 0;
  if (ds.has_true_s()) flags |= kFlagTrueS;
  if (ds.has_proxy_s()) flags |= kFlagProxyS;
  if (ds.has_cond_id()) flags |= kFlagCondId;
  out.u16(flags);
  out.u32(static_cast<std::uint32_t>(ds.d_x));
  out.u32(static_cast<std::uint32_t>(ds.d_c));
  out.u64(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (float v : ds.x_row(i)) out.f32(v);
    for (float v : ds.c_row(i)) out.f32(v);
    if (ds.has_true_s()) out.u32(ds.true_s[i]);
    if (ds.has_proxy_s()) out.u32(ds.proxy_s[i]);
    if (ds.has_cond_id()) out.u32(ds.cond_id[i]);
  }
  out.close();
}

FrameDataset read_dataset(const std::string& path) {
  BinaryReader in(path);
  in.expect_magic(kMagic, "dataset");
  const std::uint16_t version = in.u16();
  if (version != kVersion) {
    throw IoError("dataset: unsupported version " + std::to_string(version) + " in " + path);
  }
  const std::uint16_t flags = in.u16();
  if (flags & ~(kFlagTrueS | kFlagProxyS | kFlagCondId)) {
    throw IoError("dataset: unknown flag bits in " + path);
  }
  FrameDataset ds;
  ds.d_x = in.u32();
  ds.d_c = in.u32();
  const std::uint64_t n = in.u64();
  ds.xs.reserve(n * ds.d_x);
  ds.cs.reserve(n * ds.d_c);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ds.d_x; ++j) {
      const std::uint64_t at = in.offset();
      const float v = in.f32();
      if (!std::isfinite(v)) {
        throw IoError("dataset: non-finite x value at offset " + std::to_string(at) + " in " +
                      path);
      }
      ds.xs.push_back(v);
    }
    for (std::size_t j = 0; j < ds.d_c; ++j) {
      const std::uint64_t at = in.offset();
      const float v = in.f32();
      if (!std::isfinite(v)) {
        throw IoError("dataset: non-finite c value at offset " + std::to_string(at) + " in " +
                      path);
      }
      ds.cs.push_back(v);
    }
    if (flags & kFlagTrueS) ds.true_s.push_back(in.u32());
    if (flags & kFlagProxyS) ds.proxy_s.push_back(in.u32());
    if (flags & kFlagCondId) ds.cond_id.push_back(in.u32());
  }
  if (!in.at_eof()) throw IoError("dataset: trailing bytes after " + std::to_string(n) +
                                  " records in " + path);
  ds.validate();
  return ds;
}

namespace {

// Shortest representation that round-trips a float exactly.
std::string format_f32(float v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return buf;
}

}  // namespace

void write_dataset_csv(const FrameDataset& ds, const std::string& path) {
  ds.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (std::size_t j = 0; j < ds.d_x; ++j) out << (j ? ",x" : "x") << j;
  for (std::size_t j = 0; j < ds.d_c; ++j) out << ",c" << j;
  if (ds.has_cond_id()) out << ",cond_id";
  if (ds.has_true_s()) out << ",true_s";
  if (ds.has_proxy_s()) out << ",proxy_s";
  out << "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.d_x; ++j) out << (j ? "," : "") << format_f32(ds.x_row(i)[j]);
    for (std::size_t j = 0; j < ds.d_c; ++j) out << "," << format_f32(ds.c_row(i)[j]);
    if (ds.has_cond_id()) out << "," << ds.cond_id[i];
    if (ds.has_true_s()) out << "," << ds.true_s[i];
    if (ds.has_proxy_s()) out << "," << ds.proxy_s[i];
    out << "\n";
  }
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

FrameDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_csv_line(line);
  FrameDataset ds;
  std::size_t at = 0;
  while (at < header.size() && header[at] == "x" + std::to_string(ds.d_x)) {
    ++ds.d_x;
    ++at;
  }
  while (at < header.size() && header[at] == "c" + std::to_string(ds.d_c)) {
    ++ds.d_c;
    ++at;
  }
  bool has_cond = false, has_true = false, has_proxy = false;
  if (at < header.size() && header[at] == "cond_id") {
    has_cond = true;
    ++at;
  }
  if (at < header.size() && header[at] == "true_s") {
    has_true = true;
    ++at;
  }
  if (at < header.size() && header[at] == "proxy_s") {
    has_proxy = true;
    ++at;
  }
  if (at != header.size() || ds.d_x == 0 || ds.d_c == 0) {
    throw IoError("csv: malformed header in " + path);
  }
  const std::size_t expected_cells =
      ds.d_x + ds.d_c + (has_cond ? 1 : 0) + (has_true ? 1 : 0) + (has_proxy ? 1 : 0);

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != expected_cells) {
      throw IoError("csv: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                    " cells, expected " + std::to_string(expected_cells) + " in " + path);
    }
    std::size_t cell = 0;
    auto parse_f32 = [&]() {
      try {
        const float v = std::stof(cells[cell]);
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        ++cell;
        return v;
      } catch (const std::exception&) {
        throw IoError("csv: bad value '" + cells[cell] + "' at row " + std::to_string(row) +
                      " in " + path);
      }
    };
    auto parse_u32 = [&]() {
      try {
        const unsigned long v = std::stoul(cells[cell]);
        ++cell;
        return static_cast<std::uint32_t>(v);
      } catch (const std::exception&) {
        throw IoError("csv: bad label '" + cells[cell] + "' at row " + std::to_string(row) +
                      " in " + path);
      }
    };
    for (std::size_t j = 0; j < ds.d_x; ++j) ds.xs.push_back(parse_f32());
    for (std::size_t j = 0; j < ds.d_c; ++j) ds.cs.push_back(parse_f32());
    if (has_cond) ds.cond_id.push_back(parse_u32());
    if (has_true) ds.true_s.push_back(parse_u32());
    if (has_proxy) ds.proxy_s.push_back(parse_u32());
  }
  ds.validate();
  return ds;
}

FrameDataset ingest_external(const std::string& path, std::size_t d_x, std::size_t d_c,
                             DatasetFormat format) {
  FrameDataset ds = format == DatasetFormat::kBinary ? read_dataset(path) : read_dataset_csv(path);
  if (d_x != 0 && ds.d_x != d_x) {
    throw IoError("ingest: dataset d_x = " + std::to_string(ds.d_x) + ", expected " +
                  std::to_string(d_x) + " in " + path);
  }
  if (d_c != 0 && ds.d_c != d_c) {
    throw IoError("ingest: dataset d_c = " + std::to_string(ds.d_c) + ", expected " +
                  std::to_string(d_c) + " in " + path);
  }
  return ds;
}

}  // namespace icae::io
