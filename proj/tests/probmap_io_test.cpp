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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include "oracles.hpp"

namespace fdakit {
namespace {

namespace fs = std::filesystem;
using testing::random_softmax;
using testing::scratch_dir;

std::vector<char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

TEST_CASE("lossless roundtrip for both codecs") {
  const auto dir = scratch_dir("probmap_io");
  std::mt19937_64 rng(1);
  const ProbMap m = random_softmax(16, 16, 4, rng);
  for (Codec codec : {Codec::kStored, Codec::kShuffleDeflate}) {
    const fs::path p = dir / "m.fdap";
    const std::size_t n = store_probmap(m, p, codec);
    CHECK(n == fs::file_size(p));
    CHECK(load_probmap(p) == m);
  }
  fs::remove_all(dir);
}

TEST_CASE("header layout is bit exact") {
  const auto dir = scratch_dir("probmap_hdr");
  ProbMap m(3, 5, 7, true);
  m.score(2, 1, 4) = 0.25;
  store_probmap(m, dir / "h.fdap", Codec::kStored);
  const auto b = read_bytes(dir / "h.fdap");
  REQUIRE(b.size() == kProbMapHeaderSize + 7 * (8 + 3 * 5 * 8));
  CHECK(std::string(b.begin(), b.begin() + 4) == "FDAP");
  auto u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[off + i]);
    return v;
  };
  CHECK(u32(4) == 1);
  CHECK(u32(8) == 3);
  CHECK(u32(12) == 5);
  CHECK(u32(16) == 7);
  CHECK(b[20] == 1);
  CHECK(b[21] == 0);
  const ProbMapHeader h = read_probmap_header(dir / "h.fdap");
  CHECK(h.height == 3);
  CHECK(h.width == 5);
  CHECK(h.classes == 7);
  CHECK(h.normalized);
  CHECK(h.codec == Codec::kStored);
  fs::remove_all(dir);
}

TEST_CASE("format errors name the offending field") {
  const auto dir = scratch_dir("probmap_bad");
  std::mt19937_64 rng(2);
  const fs::path good = dir / "good.fdap";
  store_probmap(random_softmax(8, 8, 3, rng), good);
  const auto bytes = read_bytes(good);
  const fs::path bad = dir / "bad.fdap";

  auto expect_error = [&](std::vector<char> b, const std::string& needle) {
    write_bytes(bad, b);
    try {
      load_probmap(bad);
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CAPTURE(e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  auto wrong_magic = bytes;
  wrong_magic[0] = 'X';
  expect_error(wrong_magic, "magic");

  auto wrong_version = bytes;
  wrong_version[4] = 9;
  expect_error(wrong_version, "version");

  expect_error({bytes.begin(), bytes.begin() + 14}, "'width'");
  expect_error({bytes.begin(), bytes.begin() + 21}, "'codec'");

  auto bad_codec = bytes;
  bad_codec[21] = 42;
  expect_error(bad_codec, "codec");

  auto bad_flag = bytes;
  bad_flag[20] = 3;
  expect_error(bad_flag, "normalized");

  expect_error({bytes.begin(), bytes.end() - 5}, "plane 2");

  auto corrupt = bytes;
  corrupt[kProbMapHeaderSize + 8 + 3] ^= 0x5a;
  expect_error(corrupt, "plane 0");

  CHECK_THROWS_AS(load_probmap(dir / "missing.fdap"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("smooth softmax maps compress well") {
  // Informational: smooth fields typical of network outputs. Reported, with
  // only a loose sanity bound asserted.
  const auto dir = scratch_dir("probmap_ratio");
  const std::size_t H = 128, W = 256, K = 19;
  ProbMap m(H, W, K, true);
  std::vector<double> logits(K);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t w = 0; w < W; ++w) {
      double sum = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        // Blocky regions with a dominant class and smooth falloff.
        const std::size_t region = (h / 32) * 8 + (w / 32);
        const double logit = (region % K == k ? 6.0 : 0.0) +
                             0.5 * std::sin(0.05 * h + 0.3 * k) * std::cos(0.04 * w);
        logits[k] = std::exp(logit);
        sum += logits[k];
      }
      for (std::size_t k = 0; k < K; ++k) m.score(k, h, w) = logits[k] / sum;
    }
  }
  const std::size_t n = store_probmap(m, dir / "smooth.fdap");
  const double ratio = static_cast<double>(n) / static_cast<double>(m.byte_size());
  MESSAGE("compressed/raw ratio on smooth 128x256x19 map: " << ratio);
  CHECK(ratio < 1.0);
  CHECK(load_probmap(dir / "smooth.fdap") == m);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace fdakit
