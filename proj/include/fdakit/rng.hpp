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

#ifndef FDAKIT_RNG_HPP_
#define FDAKIT_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace fdakit {

// Recorded in every manifest that depends on random draws. Bump the version
// whenever the derivation or the draw procedure changes.
inline constexpr std::string_view kRngId = "mt19937_64+splitmix64+fnv1a/v1";

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random stream keyed by (seed, key).
//
// Every image draws from its own stream derived from the run seed and the
// image id, so results do not depend on processing order or worker count.
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard; bounded draws use rejection sampling instead of
// std::uniform_int_distribution, which is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view key);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace fdakit

#endif  // FDAKIT_RNG_HPP_
