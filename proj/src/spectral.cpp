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

#include "fdakit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace fdakit {
namespace {

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta < 0.5)) {
    std::ostringstream msg;
    msg << "beta must lie in [0, 0.5), got " << beta;
    throw ParameterError(msg.str());
  }
}

// Distance of an unshifted bin index from DC along one axis.
std::size_t folded(std::size_t idx, std::size_t n) {
  return std::min(idx, n - idx);
}

}  // namespace

AmplitudePhase decompose(const Spectrum& spectrum) {
  AmplitudePhase ap{Plane(spectrum.height(), spectrum.width()),
                    Plane(spectrum.height(), spectrum.width())};
  const auto src = spectrum.values();
  auto amp = ap.amplitude.values();
  auto phase = ap.phase.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    amp[i] = std::abs(src[i]);
    phase[i] = amp[i] == 0.0 ? 0.0 : std::arg(src[i]);
  }
  return ap;
}

Spectrum recompose(const AmplitudePhase& ap) {
  if (!ap.amplitude.same_shape(ap.phase)) {
    throw DimensionError("amplitude and phase grids differ in shape");
  }
  Spectrum spec(ap.amplitude.height(), ap.amplitude.width());
  const auto amp = ap.amplitude.values();
  const auto phase = ap.phase.values();
  auto dst = spec.values();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (!(amp[i] >= 0.0)) {
      std::ostringstream msg;
      msg << "negative amplitude " << amp[i] << " at flat index " << i;
      throw DomainError(msg.str());
    }
    dst[i] = Complex(amp[i] * std::cos(phase[i]), amp[i] * std::sin(phase[i]));
  }
  return spec;
}

bool BetaMask::contains(std::size_t h, std::size_t w) const {
  return active && folded(h, height) <= half_height &&
         folded(w, width) <= half_width;
}

std::vector<std::pair<std::size_t, std::size_t>> BetaMask::cells() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!active) return out;
  out.reserve(cell_count());
  const auto hh = static_cast<std::ptrdiff_t>(half_height);
  const auto hw = static_cast<std::ptrdiff_t>(half_width);
  const auto H = static_cast<std::ptrdiff_t>(height);
  const auto W = static_cast<std::ptrdiff_t>(width);
  for (std::ptrdiff_t dh = -hh; dh <= hh; ++dh) {
    for (std::ptrdiff_t dw = -hw; dw <= hw; ++dw) {
      out.emplace_back(static_cast<std::size_t>((dh + H) % H),
                       static_cast<std::size_t>((dw + W) % W));
    }
  }
  return out;
}

BetaMask build_mask(double beta, std::size_t height, std::size_t width) {
  check_beta(beta);
  if (height == 0 || width == 0) {
    throw DimensionError("mask over an empty grid");
  }
  BetaMask mask;
  mask.beta = beta;
  mask.height = height;
  mask.width = width;
  mask.half_height =
      static_cast<std::size_t>(std::floor(beta * static_cast<double>(height)));
  mask.half_width =
      static_cast<std::size_t>(std::floor(beta * static_cast<double>(width)));
  mask.active = mask.half_height >= 1 && mask.half_width >= 1;
  return mask;
}

TransferResult spectral_transfer_detailed(const ImageTensor& src,
                                          const ImageTensor& tgt,
                                          double beta) {
  check_beta(beta);
  src.validate();
  tgt.validate();
  if (!src.same_shape(tgt)) {
    std::ostringstream msg;
    msg << "source " << src.height() << "x" << src.width() << "x"
        << src.channels() << " and target " << tgt.height() << "x"
        << tgt.width() << "x" << tgt.channels() << " differ in shape";
    throw DimensionError(msg.str());
  }
  const BetaMask mask = build_mask(beta, src.height(), src.width());
  const auto cells = mask.cells();

  std::vector<Plane> planes;
  planes.reserve(src.channels());
  double residual = 0.0;
  for (std::size_t c = 0; c < src.channels(); ++c) {
    AmplitudePhase composite = decompose(dft2d_forward(src.plane(c)));
    if (mask.active) {
      const AmplitudePhase target = decompose(dft2d_forward(tgt.plane(c)));
      for (const auto& [h, w] : cells) {
        composite.amplitude(h, w) = target.amplitude(h, w);
      }
    }
    InverseResult inv = dft2d_inverse(recompose(composite));
    residual = std::max(residual, inv.imag_residual);
    planes.push_back(std::move(inv.plane));
  }
  return {ImageTensor(std::move(planes)), residual};
}

ImageTensor spectral_transfer(const ImageTensor& src, const ImageTensor& tgt,
                              double beta) {
  return spectral_transfer_detailed(src, tgt, beta).image;
}

std::vector<SweepEntry> beta_sweep(const ImageTensor& src,
                                   const ImageTensor& tgt,
                                   std::span<const double> betas) {
  for (double b : betas) check_beta(b);
  if (!std::is_sorted(betas.begin(), betas.end())) {
    throw ParameterError("sweep betas must be sorted ascending");
  }
  std::vector<SweepEntry> out;
  out.reserve(betas.size());
  for (double b : betas) {
    SweepEntry entry;
    entry.beta = b;
    entry.image = spectral_transfer(src, tgt, b);
    entry.l2_distance_from_src = l2_distance(entry.image, src);
    entry.mask_cells = build_mask(b, src.height(), src.width()).cell_count();
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace fdakit
