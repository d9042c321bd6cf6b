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

#include "fdakit/fusion.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"

namespace fdakit {
namespace {

using testing::random_softmax;

// Per-pixel scan with strict '>' so the first maximum wins.
LabelMap scan_argmax(const ProbMap& m) {
  LabelMap out(m.height(), m.width());
  for (std::size_t h = 0; h < m.height(); ++h) {
    for (std::size_t w = 0; w < m.width(); ++w) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < m.classes(); ++k) {
        if (m.score(k, h, w) > m.score(best, h, w)) best = k;
      }
      out(h, w) = static_cast<std::uint8_t>(best);
    }
  }
  return out;
}

ProbMap pixel_map(std::initializer_list<double> scores) {
  ProbMap m(1, 1, scores.size(), true);
  std::size_t k = 0;
  for (double s : scores) m.score(k++, 0, 0) = s;
  return m;
}

TEST_CASE("mean of one map is that map") {
  std::mt19937_64 rng(1);
  const ProbMap a = random_softmax(5, 7, 4, rng);
  const ProbMap maps[] = {a};
  CHECK(mbt_mean(maps) == a);
}

TEST_CASE("mean of opposite one-hot pixels") {
  const ProbMap maps[] = {pixel_map({1.0, 0.0}), pixel_map({0.0, 1.0})};
  const ProbMap m = mbt_mean(maps);
  CHECK(m.score(0, 0, 0) == 0.5);
  CHECK(m.score(1, 0, 0) == 0.5);
  CHECK(m.normalized());
}

TEST_CASE("mean of three maps matches the elementwise oracle") {
  std::mt19937_64 rng(2);
  const ProbMap maps[] = {random_softmax(6, 8, 5, rng), random_softmax(6, 8, 5, rng),
                          random_softmax(6, 8, 5, rng)};
  const ProbMap m = mbt_mean(maps);
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t h = 0; h < 6; ++h) {
      for (std::size_t w = 0; w < 8; ++w) {
        const double oracle = (maps[0].score(k, h, w) + maps[1].score(k, h, w) +
                               maps[2].score(k, h, w)) / 3.0;
        CHECK(std::abs(m.score(k, h, w) - oracle) <= 1e-12);
      }
    }
  }
}

TEST_CASE("normalized flag needs every input normalized") {
  std::mt19937_64 rng(3);
  ProbMap a = random_softmax(2, 2, 3, rng);
  ProbMap b = random_softmax(2, 2, 3, rng);
  b.set_normalized(false);
  const ProbMap maps[] = {a, b};
  CHECK_FALSE(mbt_mean(maps).normalized());
}

TEST_CASE("mean errors") {
  CHECK_THROWS_AS(mbt_mean(std::span<const ProbMap>()), ParameterError);
  const ProbMap maps[] = {ProbMap(2, 2, 3), ProbMap(2, 3, 3)};
  CHECK_THROWS_AS(mbt_mean(maps), DimensionError);
}

TEST_CASE("mean is exactly invariant to list order given model indices") {
  std::mt19937_64 rng(4);
  std::vector<ProbMap> maps;
  for (int i = 0; i < 5; ++i) maps.push_back(random_softmax(9, 11, 6, rng));
  std::vector<IndexedProbMap> indexed;
  for (std::size_t i = 0; i < maps.size(); ++i) indexed.push_back({i, &maps[i]});
  const ProbMap reference = mbt_mean(std::span<const IndexedProbMap>(indexed));
  CHECK(reference == mbt_mean(maps));
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(indexed.begin(), indexed.end(), rng);
    CHECK(mbt_mean(std::span<const IndexedProbMap>(indexed)) == reference);
  }
}

TEST_CASE("argmax picks the winner and breaks ties low") {
  CHECK(argmax_labels(pixel_map({0.1, 0.7, 0.2}))(0, 0) == 1);
  CHECK(argmax_labels(pixel_map({1.0 / 3, 1.0 / 3, 1.0 / 3}))(0, 0) == 0);
  CHECK(argmax_labels(pixel_map({0.2, 0.4, 0.4}))(0, 0) == 1);
}

TEST_CASE("argmax matches the scan oracle on a 32x32x19 map") {
  std::mt19937_64 rng(5);
  const ProbMap m = random_softmax(32, 32, 19, rng);
  CHECK(argmax_labels(m) == scan_argmax(m));
}

TEST_CASE("argmax is invariant to positive scaling") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbMap m = random_softmax(8, 8, 7, rng);
    ProbMap scaled = m;
    const double s = scale(rng);
    for (double& v : scaled.values()) v *= s;
    CHECK(argmax_labels(scaled) == argmax_labels(m));
  }
}

TEST_CASE("global gate") {
  std::mt19937_64 rng(7);
  const ProbMap m = random_softmax(16, 16, 5, rng);

  SUBCASE("threshold 0 passes every pixel") {
    CHECK(pseudo_labels(m, GatePolicy::global(0.0)) == argmax_labels(m));
  }
  SUBCASE("out of range thresholds") {
    CHECK_THROWS_AS(pseudo_labels(m, GatePolicy::global(1.0 + 1e-9)), ParameterError);
    CHECK_THROWS_AS(pseudo_labels(m, GatePolicy::global(-0.1)), ParameterError);
  }
  SUBCASE("closed gate") {
    ProbMap flat(4, 4, 2, true);
    for (double& v : flat.plane(0)) v = 0.7;
    for (double& v : flat.plane(1)) v = 0.3;
    const LabelMap gated = pseudo_labels(flat, GatePolicy::global(1.0));
    for (auto l : gated.values()) CHECK(l == kIgnoreLabel);
  }
  SUBCASE("unnormalized input is rejected") {
    ProbMap raw = m;
    raw.set_normalized(false);
    CHECK_THROWS_AS(pseudo_labels(raw, GatePolicy::global(0.5)), PreconditionError);
  }
}

TEST_CASE("threshold 0.9 keeps exactly the constructed confident 40%") {
  // 10x10 map, K = 3. Pixels 0..39 win with 0.95 (class p % 3); the rest win
  // with 0.6. Exactly 40 pixels pass.
  ProbMap m(10, 10, 3, true);
  for (std::size_t p = 0; p < 100; ++p) {
    const std::size_t winner = p % 3;
    const double top = p < 40 ? 0.95 : 0.6;
    const double rest = (1.0 - top) / 2.0;
    for (std::size_t k = 0; k < 3; ++k) {
      m.score(k, p / 10, p % 10) = k == winner ? top : rest;
    }
  }
  const LabelMap labels = pseudo_labels(m, GatePolicy::global(0.9));
  std::size_t kept = 0;
  for (std::size_t p = 0; p < 100; ++p) {
    const auto l = labels.values()[p];
    if (p < 40) {
      CHECK(l == p % 3);
      ++kept;
    } else {
      CHECK(l == kIgnoreLabel);
    }
  }
  CHECK(kept == 40);
}

TEST_CASE("raising the threshold only removes labels") {
  std::mt19937_64 rng(8);
  const ProbMap m = random_softmax(20, 20, 6, rng, 1.5);
  LabelMap previous = pseudo_labels(m, GatePolicy::global(0.0));
  for (double t = 0.05; t <= 1.0; t += 0.05) {
    const LabelMap next = pseudo_labels(m, GatePolicy::global(t));
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (previous.values()[i] == kIgnoreLabel) {
        CHECK(next.values()[i] == kIgnoreLabel);
      } else {
        CHECK((next.values()[i] == previous.values()[i] ||
               next.values()[i] == kIgnoreLabel));
      }
    }
    previous = next;
  }
}

TEST_CASE("threshold 0 equals argmax on 1000 random maps") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> dim(1, 12), classes(1, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    const ProbMap m = random_softmax(dim(rng), dim(rng), classes(rng), rng);
    REQUIRE(pseudo_labels(m, GatePolicy::global(0.0)) == argmax_labels(m));
  }
}

TEST_CASE("per-class top fraction") {
  // One row of 10 pixels, K = 2. Class 0 wins pixels 0..5 with scores
  // 0.6..0.85 in steps; class 1 wins pixels 6..9.
  ProbMap m(1, 10, 2, true);
  const double win[] = {0.6, 0.85, 0.7, 0.75, 0.7, 0.65, 0.9, 0.55, 0.8, 0.95};
  for (std::size_t p = 0; p < 10; ++p) {
    const std::size_t k = p < 6 ? 0 : 1;
    m.score(k, 0, p) = win[p];
    m.score(1 - k, 0, p) = 1.0 - win[p];
  }
  SUBCASE("fraction 1 keeps everything") {
    CHECK(pseudo_labels(m, GatePolicy::per_class(1.0)) == argmax_labels(m));
  }
  SUBCASE("fraction 0.5") {
    // Class 0: 6 pixels -> keep 3: 0.85 (p1), 0.75 (p3), then the 0.7 tie
    // goes to p2 by scan order. Class 1: 4 pixels -> keep 2: 0.95, 0.9.
    const LabelMap l = pseudo_labels(m, GatePolicy::per_class(0.5));
    const std::uint8_t I = kIgnoreLabel;
    const std::uint8_t expected[] = {I, 0, 0, 0, I, I, 1, I, I, 1};
    for (std::size_t p = 0; p < 10; ++p) CHECK(l.values()[p] == expected[p]);
  }
  SUBCASE("fraction rounds up") {
    // ceil(0.2 * 6) = 2, ceil(0.2 * 4) = 1.
    const LabelMap l = pseudo_labels(m, GatePolicy::per_class(0.2));
    std::size_t kept0 = 0, kept1 = 0;
    for (auto v : l.values()) {
      kept0 += v == 0;
      kept1 += v == 1;
    }
    CHECK(kept0 == 2);
    CHECK(kept1 == 1);
  }
  SUBCASE("invalid fractions") {
    CHECK_THROWS_AS(pseudo_labels(m, GatePolicy::per_class(0.0)), ParameterError);
    CHECK_THROWS_AS(pseudo_labels(m, GatePolicy::per_class(1.5)), ParameterError);
  }
}

TEST_CASE("probability map validation") {
  std::mt19937_64 rng(10);
  ProbMap m = random_softmax(4, 4, 3, rng);
  CHECK_NOTHROW(m.validate());
  m.score(1, 2, 2) += 0.1;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m.set_normalized(false);
  CHECK_NOTHROW(m.validate());
  m.score(0, 0, 0) = -1.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
}

}  // namespace
}  // namespace fdakit
