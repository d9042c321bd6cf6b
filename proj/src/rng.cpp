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

#include "fdakit/rng.hpp"

#include <limits>

#include "fdakit/error.hpp"

namespace fdakit {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::string_view key)
    : engine_(splitmix64(splitmix64(seed) ^ fnv1a64(key))) {}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("uniform_below needs a positive bound");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // 2^64 mod bound; the top `excess` values are rejected to avoid bias.
  const std::uint64_t excess = (kMax % bound + 1) % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (excess != 0 && v > kMax - excess);
  return v % bound;
}

}  // namespace fdakit
