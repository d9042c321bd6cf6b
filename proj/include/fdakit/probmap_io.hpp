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

#ifndef FDAKIT_PROBMAP_IO_HPP_
#define FDAKIT_PROBMAP_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "fdakit/probmap.hpp"

namespace fdakit {

// Cache file layout, little-endian:
//
//   offset  size  field
//        0     4  magic "FDAP"
//        4     4  u32 version (1)
//        8     4  u32 height
//       12     4  u32 width
//       16     4  u32 classes
//       20     1  u8  normalized (0 or 1)
//       21     1  u8  codec id
//       22     -  per class plane: u64 payload byte count, then the payload
//
// Each payload holds height*width IEEE-754 doubles encoded with the codec.
enum class Codec : std::uint8_t {
  kStored = 0,         // raw little-endian doubles
  kShuffleDeflate = 1, // byte-plane shuffle, then zlib deflate
};

inline constexpr std::uint32_t kProbMapVersion = 1;
inline constexpr std::size_t kProbMapHeaderSize = 22;
inline constexpr Codec kDefaultCodec = Codec::kShuffleDeflate;

struct ProbMapHeader {
  std::uint32_t version = kProbMapVersion;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t classes = 0;
  bool normalized = false;
  Codec codec = kDefaultCodec;

  std::size_t map_bytes() const {
    return static_cast<std::size_t>(height) * width * classes * sizeof(double);
  }
};

// Returns the number of bytes written.
std::size_t store_probmap(const ProbMap& map, const std::filesystem::path& path,
                          Codec codec = kDefaultCodec);

ProbMap load_probmap(const std::filesystem::path& path);

// Loads into `dst`, reusing its allocation. Used by the streaming engine.
void load_probmap_into(const std::filesystem::path& path, ProbMap& dst);

// Reads and validates only the fixed header.
ProbMapHeader read_probmap_header(const std::filesystem::path& path);

}  // namespace fdakit

#endif  // FDAKIT_PROBMAP_IO_HPP_
