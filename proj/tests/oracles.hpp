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

// Independent reference computations and generators shared by the tests.
// Nothing here calls into the code paths it is used to check.

#ifndef FDAKIT_TESTS_ORACLES_HPP_
#define FDAKIT_TESTS_ORACLES_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fdakit/grid.hpp"
#include "fdakit/image.hpp"
#include "fdakit/probmap.hpp"
#include "fdakit/probmap_io.hpp"
#include "fdakit/streaming.hpp"

namespace fdakit::testing {

// Direct O(H^2 W^2) evaluation of the 2D DFT with long double accumulation.
inline Spectrum brute_force_dft(const Plane& x) {
  const std::size_t H = x.height();
  const std::size_t W = x.width();
  Spectrum out(H, W);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t m = 0; m < H; ++m) {
    for (std::size_t n = 0; n < W; ++n) {
      long double re = 0.0L;
      long double im = 0.0L;
      for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t w = 0; w < W; ++w) {
          // Reduce the phase index exactly before converting to an angle.
          const std::size_t hm = (h * m) % H;
          const std::size_t wn = (w * n) % W;
          const long double angle =
              -two_pi * (static_cast<long double>(hm) / H +
                         static_cast<long double>(wn) / W);
          re += x(h, w) * std::cos(angle);
          im += x(h, w) * std::sin(angle);
        }
      }
      out(m, n) = {static_cast<double>(re), static_cast<double>(im)};
    }
  }
  return out;
}

// Direct 1D DFT, sign -1 forward, +1 inverse, unscaled.
inline std::vector<std::complex<double>> brute_force_dft1(
    const std::vector<std::complex<double>>& x, int sign) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t k = 0; k < n; ++k) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const long double angle =
          sign * two_pi * static_cast<long double>((j * k) % n) / n;
      const long double c = std::cos(angle), s = std::sin(angle);
      re += x[j].real() * c - x[j].imag() * s;
      im += x[j].real() * s + x[j].imag() * c;
    }
    out[k] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

inline Plane random_plane(std::size_t h, std::size_t w, std::mt19937_64& rng,
                          double lo = 0.0, double hi = 255.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Plane p(h, w);
  for (double& v : p.values()) v = dist(rng);
  return p;
}

inline ImageTensor random_image(std::size_t h, std::size_t w, std::size_t c,
                                std::mt19937_64& rng, double lo = 0.0,
                                double hi = 255.0) {
  std::vector<Plane> planes;
  for (std::size_t i = 0; i < c; ++i) planes.push_back(random_plane(h, w, rng, lo, hi));
  return ImageTensor(std::move(planes));
}

// Softmax of random logits; `sharpness` scales the logits.
inline ProbMap random_softmax(std::size_t h, std::size_t w, std::size_t k,
                              std::mt19937_64& rng, double sharpness = 3.0) {
  std::normal_distribution<double> dist(0.0, sharpness);
  ProbMap map(h, w, k, true);
  std::vector<double> logits(k);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double mx = -1e300;
      for (auto& l : logits) {
        l = dist(rng);
        mx = std::max(mx, l);
      }
      double sum = 0.0;
      for (auto& l : logits) {
        l = std::exp(l - mx);
        sum += l;
      }
      for (std::size_t c = 0; c < k; ++c) map.score(c, y, x) = logits[c] / sum;
    }
  }
  return map;
}

// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("fdakit_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Writes `images` x `models` random softmax maps under `dir` and returns a
// manifest over them (also saved as dir/manifest.tsv, with relative paths).
inline FusionManifest make_fusion_fixture(const std::filesystem::path& dir,
                                          std::size_t images, std::size_t models,
                                          std::size_t h, std::size_t w,
                                          std::size_t k, std::uint64_t seed,
                                          std::size_t budget = std::size_t{1} << 30) {
  std::mt19937_64 rng(seed);
  FusionManifest manifest;
  manifest.model_count = models;
  manifest.memory_budget = budget;
  std::filesystem::create_directories(dir / "cache");
  std::ofstream tsv(dir / "manifest.tsv");
  for (std::size_t i = 0; i < images; ++i) {
    ManifestEntry entry;
    entry.image_id = "img" + std::to_string(1000 + i);
    tsv << entry.image_id;
    for (std::size_t m = 0; m < models; ++m) {
      const std::string rel = "cache/" + entry.image_id + "_m" + std::to_string(m) + ".fdap";
      store_probmap(random_softmax(h, w, k, rng, 2.0), dir / rel);
      entry.model_paths.push_back(dir / rel);
      tsv << '\t' << rel;
    }
    tsv << '\n';
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

}  // namespace fdakit::testing

#endif  // FDAKIT_TESTS_ORACLES_HPP_
