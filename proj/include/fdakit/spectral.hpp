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

#ifndef FDAKIT_SPECTRAL_HPP_
#define FDAKIT_SPECTRAL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "fdakit/fft.hpp"
#include "fdakit/grid.hpp"
#include "fdakit/image.hpp"

namespace fdakit {

// Polar view of a spectrum: amplitude |F| and phase arg F in (-pi, pi].
struct AmplitudePhase {
  Plane amplitude;
  Plane phase;
};

// arg(0) is taken as 0.
AmplitudePhase decompose(const Spectrum& spectrum);

// Throws DomainError on a negative amplitude entry.
Spectrum recompose(const AmplitudePhase& ap);

// Centered low-frequency window of half-extent floor(beta*H) x floor(beta*W).
//
// The region is inclusive on both sides, so an active mask covers
// (2*half_height + 1) * (2*half_width + 1) cells and is closed under frequency
// negation. A window that is empty along either axis deactivates the mask.
struct BetaMask {
  double beta = 0.0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t half_height = 0;
  std::size_t half_width = 0;
  bool active = false;

  std::size_t cell_count() const {
    return active ? (2 * half_height + 1) * (2 * half_width + 1) : 0;
  }

  // Membership of the unshifted (DC at (0,0)) bin (h, w).
  bool contains(std::size_t h, std::size_t w) const;

  // Unshifted bin coordinates of every cell, row-major in centered order.
  std::vector<std::pair<std::size_t, std::size_t>> cells() const;
};

// Requires 0 <= beta < 0.5 and H, W >= 1.
BetaMask build_mask(double beta, std::size_t height, std::size_t width);

// Canonical window sizes for sweeps and batch defaults.
inline constexpr double kDefaultBetas[] = {0.01, 0.05, 0.09};

struct TransferResult {
  ImageTensor image;
  // Largest imaginary part discarded by any channel's inverse transform.
  double imag_residual = 0.0;
};

// Replaces the low-frequency amplitude of every `src` channel with that of
// the matching `tgt` channel inside the beta window, keeps the `src` phase,
// and transforms back. Output is real and unclamped.
TransferResult spectral_transfer_detailed(const ImageTensor& src,
                                          const ImageTensor& tgt, double beta);

ImageTensor spectral_transfer(const ImageTensor& src, const ImageTensor& tgt,
                              double beta);

struct SweepEntry {
  double beta = 0.0;
  ImageTensor image;
  double l2_distance_from_src = 0.0;
  std::size_t mask_cells = 0;
};

// One transfer per beta. `betas` must be ascending and each in [0, 0.5).
std::vector<SweepEntry> beta_sweep(const ImageTensor& src,
                                   const ImageTensor& tgt,
                                   std::span<const double> betas);

}  // namespace fdakit

#endif  // FDAKIT_SPECTRAL_HPP_
