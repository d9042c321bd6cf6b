/* Copyright 2026 The fdakit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fdakit/probmap_io.hpp"

#include <zlib.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace fdakit {

static_assert(std::endian::native == std::endian::little,
              "cache files are written with the host byte order");

namespace {

constexpr std::array<char, 4> kMagic = {'F', 'D', 'A', 'P'};

std::string where(const std::filesystem::path& path) {
  return path.string() + ": ";
}

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::filesystem::path& path, const char* field) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw FormatError(where(path) + "truncated field '" + field + "'");
  }
  return value;
}

// Byte-plane shuffle: groups byte j of every double together so the smooth
// high-order bytes of neighbouring scores compress well.
std::vector<unsigned char> shuffle(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<unsigned char> out(n * sizeof(double));
  const auto* bytes = reinterpret_cast<const unsigned char*>(values.data());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < sizeof(double); ++b) {
      out[b * n + i] = bytes[i * sizeof(double) + b];
    }
  }
  return out;
}

void unshuffle(std::span<const unsigned char> in, std::span<double> values) {
  const std::size_t n = values.size();
  auto* bytes = reinterpret_cast<unsigned char*>(values.data());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < sizeof(double); ++b) {
      bytes[i * sizeof(double) + b] = in[b * n + i];
    }
  }
}

std::vector<unsigned char> encode_plane(std::span<const double> values,
                                        Codec codec) {
  const std::size_t raw_bytes = values.size_bytes();
  if (codec == Codec::kStored) {
    const auto* p = reinterpret_cast<const unsigned char*>(values.data());
    return {p, p + raw_bytes};
  }
  const auto shuffled = shuffle(values);
  uLongf bound = compressBound(static_cast<uLong>(raw_bytes));
  std::vector<unsigned char> out(bound);
  const int rc = compress2(out.data(), &bound, shuffled.data(),
                           static_cast<uLong>(raw_bytes), Z_DEFAULT_COMPRESSION);
  if (rc != Z_OK) throw IoError("zlib compression failed (" + std::to_string(rc) + ")");
  out.resize(bound);
  return out;
}

ProbMapHeader parse_header(std::ifstream& in,
                           const std::filesystem::path& path) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4) throw FormatError(where(path) + "truncated field 'magic'");
  if (magic != kMagic) throw FormatError(where(path) + "bad magic, expected FDAP");

  ProbMapHeader h;
  h.version = get<std::uint32_t>(in, path, "version");
  if (h.version != kProbMapVersion) {
    throw FormatError(where(path) + "unsupported version " +
                      std::to_string(h.version));
  }
  h.height = get<std::uint32_t>(in, path, "height");
  h.width = get<std::uint32_t>(in, path, "width");
  h.classes = get<std::uint32_t>(in, path, "classes");
  if (h.height == 0) throw FormatError(where(path) + "field 'height' is zero");
  if (h.width == 0) throw FormatError(where(path) + "field 'width' is zero");
  if (h.classes == 0) throw FormatError(where(path) + "field 'classes' is zero");
  const auto norm = get<std::uint8_t>(in, path, "normalized");
  if (norm > 1) {
    throw FormatError(where(path) + "field 'normalized' holds " +
                      std::to_string(norm));
  }
  h.normalized = norm == 1;
  const auto codec = get<std::uint8_t>(in, path, "codec");
  if (codec != static_cast<std::uint8_t>(Codec::kStored) &&
      codec != static_cast<std::uint8_t>(Codec::kShuffleDeflate)) {
    throw FormatError(where(path) + "unknown codec id " + std::to_string(codec));
  }
  h.codec = static_cast<Codec>(codec);
  return h;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(where(path) + "cannot open for reading");
  return in;
}

}  // namespace

std::size_t store_probmap(const ProbMap& map, const std::filesystem::path& path,
                          Codec codec) {
  if (map.classes() == 0 || map.pixels() == 0) {
    throw DimensionError("refusing to store an empty probability map");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(where(path) + "cannot open for writing");

  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kProbMapVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(map.height()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(map.width()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(map.classes()));
  put<std::uint8_t>(out, map.normalized() ? 1 : 0);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(codec));
  std::size_t written = kProbMapHeaderSize;

  for (std::size_t k = 0; k < map.classes(); ++k) {
    const auto payload = encode_plane(map.plane(k), codec);
    put<std::uint64_t>(out, payload.size());
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    written += sizeof(std::uint64_t) + payload.size();
  }
  out.flush();
  if (!out) throw IoError(where(path) + "write failed");
  return written;
}

ProbMapHeader read_probmap_header(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_header(in, path);
}

void load_probmap_into(const std::filesystem::path& path, ProbMap& dst) {
  auto in = open_for_read(path);
  const ProbMapHeader h = parse_header(in, path);
  dst.reshape(h.height, h.width, h.classes);
  dst.set_normalized(h.normalized);

  const std::size_t raw_bytes = dst.pixels() * sizeof(double);
  std::vector<unsigned char> payload;
  std::vector<unsigned char> shuffled;
  for (std::size_t k = 0; k < h.classes; ++k) {
    const std::string field = "payload size of plane " + std::to_string(k);
    const auto size = get<std::uint64_t>(in, path, field.c_str());
    if (h.codec == Codec::kStored && size != raw_bytes) {
      throw FormatError(where(path) + "plane " + std::to_string(k) +
                        " stores " + std::to_string(size) + " bytes, expected " +
                        std::to_string(raw_bytes));
    }
    if (size > raw_bytes + raw_bytes / 100 + 1024) {
      throw FormatError(where(path) + "implausible payload size " +
                        std::to_string(size) + " for plane " + std::to_string(k));
    }
    payload.resize(size);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(size));
    if (in.gcount() != static_cast<std::streamsize>(size)) {
      throw FormatError(where(path) + "truncated payload of plane " +
                        std::to_string(k));
    }
    auto plane = dst.plane(k);
    if (h.codec == Codec::kStored) {
      std::memcpy(plane.data(), payload.data(), raw_bytes);
      continue;
    }
    shuffled.resize(raw_bytes);
    uLongf out_len = static_cast<uLongf>(raw_bytes);
    const int rc = uncompress(shuffled.data(), &out_len, payload.data(),
                              static_cast<uLong>(size));
    if (rc != Z_OK || out_len != raw_bytes) {
      throw FormatError(where(path) + "corrupt payload of plane " +
                        std::to_string(k) + " (zlib " + std::to_string(rc) +
                        ", " + std::to_string(out_len) + " bytes)");
    }
    unshuffle(shuffled, plane);
  }
}

ProbMap load_probmap(const std::filesystem::path& path) {
  ProbMap map;
  load_probmap_into(path, map);
  return map;
}

}  // namespace fdakit
