// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lrtf/tensor.hpp"

namespace lrtf {

// Binary tensor container:
//   "GWT1" | order u8 | dims order x u64 LE | payload prod(dims) x f64 LE,
// stored last-index-fastest. The mask container "GWM1" has the same header
// and one byte per entry (1 = observed, 0 = missing).

namespace detail {

static_assert(std::numeric_limits<double>::is_iec559, "IEEE-754 doubles required");

inline void append_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void append_f64le(std::string& out, double d) {
  append_u64le(out, std::bit_cast<std::uint64_t>(d));
}

[[noreturn]] inline void io_fail(const std::filesystem::path& path,
                                 const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

/// Writes via a temp file in the same directory plus rename, so interrupted
/// runs never leave a truncated artifact at the destination.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) io_fail(tmp, "cannot open for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    os.flush();
    if (!os) io_fail(tmp, "write failed");
  }
  std::filesystem::rename(tmp, path);
}

struct HeaderInfo {
  std::vector<std::size_t> dims;
  std::size_t total = 0;
};

inline HeaderInfo read_header(std::ifstream& is, const std::filesystem::path& path,
                              const char expected_magic[4], const char* kind) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, expected_magic, 4) != 0)
    io_fail(path, std::string("bad magic, not a ") + kind + " file");

  unsigned char order = 0;
  is.read(reinterpret_cast<char*>(&order), 1);
  if (!is || order == 0) io_fail(path, "invalid order");

  HeaderInfo info;
  info.dims.resize(order);
  std::size_t total = 1;
  for (unsigned d = 0; d < order; ++d) {
    unsigned char raw[8];
    is.read(reinterpret_cast<char*>(raw), 8);
    if (!is) io_fail(path, "truncated header");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | raw[i];
    if (v == 0) io_fail(path, "zero dimension");
    if (v > std::numeric_limits<std::size_t>::max() / total)
      io_fail(path, "dims overflow");
    total *= static_cast<std::size_t>(v);
    info.dims[d] = static_cast<std::size_t>(v);
  }
  info.total = total;
  return info;
}

inline void check_payload_size(std::ifstream& is, const std::filesystem::path& path,
                               std::size_t header_bytes, std::size_t payload_bytes) {
  const auto pos = is.tellg();
  is.seekg(0, std::ios::end);
  const auto end = is.tellg();
  is.seekg(pos);
  const std::size_t actual = static_cast<std::size_t>(end);
  if (actual < header_bytes + payload_bytes) io_fail(path, "truncated payload");
  if (actual > header_bytes + payload_bytes) io_fail(path, "trailing data");
}

}  // namespace detail

inline void write_tensor_file(const std::filesystem::path& path, const DenseTensor& t) {
  detail::check(t.order() <= 255, "tensor order exceeds the file format limit");
  std::string bytes;
  bytes.reserve(5 + 8 * t.dims().size() + 8 * t.size());
  bytes.append("GWT1", 4);
  bytes.push_back(static_cast<char>(t.order()));
  for (std::size_t d : t.dims()) detail::append_u64le(bytes, d);
  for (std::size_t f = 0; f < t.size(); ++f) detail::append_f64le(bytes, t[f]);
  detail::write_file_atomic(path, bytes);
}

[[nodiscard]] inline DenseTensor read_tensor_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) detail::io_fail(path, "cannot open");
  const auto info = detail::read_header(is, path, "GWT1", "tensor");
  const std::size_t header_bytes = 5 + 8 * info.dims.size();
  if (info.total > std::numeric_limits<std::size_t>::max() / 8)
    detail::io_fail(path, "dims overflow");
  detail::check_payload_size(is, path, header_bytes, 8 * info.total);

  std::vector<double> data(info.total);
  std::vector<unsigned char> raw(8 * info.total);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!is) detail::io_fail(path, "truncated payload");
  for (std::size_t f = 0; f < info.total; ++f) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | raw[8 * f + static_cast<std::size_t>(i)];
    data[f] = std::bit_cast<double>(v);
  }
  return DenseTensor(info.dims, std::move(data));
}

inline void write_mask_file(const std::filesystem::path& path,
                            const ObservationMask& mask) {
  detail::check(mask.order() <= 255, "mask order exceeds the file format limit");
  std::string bytes;
  bytes.reserve(5 + 8 * mask.dims().size() + mask.size());
  bytes.append("GWM1", 4);
  bytes.push_back(static_cast<char>(mask.order()));
  for (std::size_t d : mask.dims()) detail::append_u64le(bytes, d);
  for (std::uint8_t b : mask.bytes()) bytes.push_back(static_cast<char>(b));
  detail::write_file_atomic(path, bytes);
}

[[nodiscard]] inline ObservationMask read_mask_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) detail::io_fail(path, "cannot open");
  const auto info = detail::read_header(is, path, "GWM1", "mask");
  const std::size_t header_bytes = 5 + 8 * info.dims.size();
  detail::check_payload_size(is, path, header_bytes, info.total);

  std::vector<std::uint8_t> bytes(info.total);
  is.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!is) detail::io_fail(path, "truncated payload");
  for (std::uint8_t b : bytes)
    if (b > 1) detail::io_fail(path, "mask byte outside {0,1}");
  return ObservationMask(info.dims, std::move(bytes));
}

}  // namespace lrtf
