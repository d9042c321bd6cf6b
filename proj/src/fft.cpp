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

#include "fdakit/fft.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace fdakit {
namespace {

std::vector<Complex> make_twiddles(std::size_t n, double sign) {
  std::vector<Complex> tw(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle =
        sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
        static_cast<double>(n);
    tw[k] = Complex(std::cos(angle), std::sin(angle));
  }
  return tw;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

struct FftPlan::Bluestein {
  explicit Bluestein(std::size_t n)
      : n(n), m(next_pow2(2 * n - 1)), inner(m), chirp(n), kernel(m) {
    // chirp[j] = exp(-i*pi*j^2/n); j^2 is reduced mod 2n to keep the angle
    // small, since the chirp is periodic in j^2 with period 2n.
    const std::uint64_t period = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t jj = (static_cast<std::uint64_t>(j) * j) % period;
      const double angle =
          -std::numbers::pi * static_cast<double>(jj) / static_cast<double>(n);
      chirp[j] = Complex(std::cos(angle), std::sin(angle));
    }
    std::vector<Complex> b(m, Complex(0.0, 0.0));
    b[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) {
      b[j] = std::conj(chirp[j]);
      b[m - j] = std::conj(chirp[j]);
    }
    inner.transform(b, kernel, Direction::kForward);
  }

  // Forward transform only; the inverse goes through conjugation.
  void forward(const Complex* in, std::ptrdiff_t in_stride,
               Complex* out) const {
    std::vector<Complex> a(m, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = in[static_cast<std::ptrdiff_t>(j) * in_stride] * chirp[j];
    }
    std::vector<Complex> fa(m);
    inner.transform(a, fa, Direction::kForward);
    for (std::size_t k = 0; k < m; ++k) fa[k] *= kernel[k];
    inner.transform(fa, a, Direction::kInverse);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  }

  std::size_t n;
  std::size_t m;
  FftPlan inner;
  std::vector<Complex> chirp;
  std::vector<Complex> kernel;
};

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw DimensionError("FFT length must be at least 1");

  // Factor out 4s first, then 2s, then odd primes.
  std::size_t rest = n;
  std::size_t p = 4;
  while (rest > 1) {
    while (rest % p != 0) {
      switch (p) {
        case 4: p = 2; break;
        case 2: p = 3; break;
        default: p += 2; break;
      }
      if (p * p > rest) p = rest;
    }
    rest /= p;
    radices_.push_back(p);
    remainders_.push_back(rest);
  }
  if (radices_.empty()) {
    radices_.push_back(1);
    remainders_.push_back(1);
  }

  const std::size_t largest =
      *std::max_element(radices_.begin(), radices_.end());
  if (largest > kMaxDirectRadix) {
    bluestein_ = std::make_shared<const Bluestein>(n);
    radices_.clear();
    remainders_.clear();
    return;
  }
  twiddles_fwd_ = make_twiddles(n, -1.0);
  twiddles_inv_ = make_twiddles(n, +1.0);
}

void FftPlan::transform(std::span<const Complex> in, std::span<Complex> out,
                        Direction dir) const {
  if (in.size() != n_ || out.size() != n_) {
    throw DimensionError("FFT buffer length " + std::to_string(in.size()) +
                         "/" + std::to_string(out.size()) +
                         " does not match plan length " + std::to_string(n_));
  }
  transform(in.data(), 1, out.data(), dir);
}

void FftPlan::transform(const Complex* in, std::ptrdiff_t in_stride,
                        Complex* out, Direction dir) const {
  if (n_ == 1) {
    out[0] = in[0];
    return;
  }
  if (bluestein_) {
    if (dir == Direction::kForward) {
      bluestein_->forward(in, in_stride, out);
      return;
    }
    // inverse(x) = conj(forward(conj(x)))
    std::vector<Complex> conj_in(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      conj_in[j] = std::conj(in[static_cast<std::ptrdiff_t>(j) * in_stride]);
    }
    bluestein_->forward(conj_in.data(), 1, out);
    for (std::size_t k = 0; k < n_; ++k) out[k] = std::conj(out[k]);
    return;
  }
  work(out, in, 1, in_stride, 0, dir);
}

void FftPlan::work(Complex* out, const Complex* in, std::size_t fstride,
                   std::ptrdiff_t in_stride, std::size_t stage,
                   Direction dir) const {
  const std::size_t p = radices_[stage];
  const std::size_t m = remainders_[stage];
  const std::ptrdiff_t step = static_cast<std::ptrdiff_t>(fstride) * in_stride;

  if (m == 1) {
    for (std::size_t j = 0; j < p; ++j) {
      out[j] = in[static_cast<std::ptrdiff_t>(j) * step];
    }
  } else {
    for (std::size_t j = 0; j < p; ++j) {
      work(out + j * m, in + static_cast<std::ptrdiff_t>(j) * step,
           fstride * p, in_stride, stage + 1, dir);
    }
  }

  const auto& tw = dir == Direction::kForward ? twiddles_fwd_ : twiddles_inv_;
  switch (p) {
    case 2: butterfly2(out, fstride, m, tw); break;
    case 4: butterfly4(out, fstride, m, tw, dir); break;
    default: butterfly_generic(out, fstride, p, m, tw); break;
  }
}

void FftPlan::butterfly2(Complex* out, std::size_t fstride, std::size_t m,
                         const std::vector<Complex>& tw) const {
  Complex* out2 = out + m;
  for (std::size_t k = 0; k < m; ++k) {
    const Complex t = out2[k] * tw[k * fstride];
    out2[k] = out[k] - t;
    out[k] += t;
  }
}

void FftPlan::butterfly4(Complex* out, std::size_t fstride, std::size_t m,
                         const std::vector<Complex>& tw, Direction dir) const {
  for (std::size_t k = 0; k < m; ++k) {
    const Complex s0 = out[k + m] * tw[k * fstride];
    const Complex s1 = out[k + 2 * m] * tw[2 * k * fstride];
    const Complex s2 = out[k + 3 * m] * tw[3 * k * fstride];
    const Complex s5 = out[k] - s1;
    out[k] += s1;
    const Complex s3 = s0 + s2;
    const Complex s4 = s0 - s2;
    out[k + 2 * m] = out[k] - s3;
    out[k] += s3;
    if (dir == Direction::kForward) {
      out[k + m] = Complex(s5.real() + s4.imag(), s5.imag() - s4.real());
      out[k + 3 * m] = Complex(s5.real() - s4.imag(), s5.imag() + s4.real());
    } else {
      out[k + m] = Complex(s5.real() - s4.imag(), s5.imag() + s4.real());
      out[k + 3 * m] = Complex(s5.real() + s4.imag(), s5.imag() - s4.real());
    }
  }
}

void FftPlan::butterfly_generic(Complex* out, std::size_t fstride,
                                std::size_t p, std::size_t m,
                                const std::vector<Complex>& tw) const {
  std::array<Complex, kMaxDirectRadix + 1> scratch;
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t q = 0; q < p; ++q) scratch[q] = out[u + q * m];
    for (std::size_t q1 = 0; q1 < p; ++q1) {
      const std::size_t k = u + q1 * m;
      std::size_t twidx = 0;
      Complex acc = scratch[0];
      for (std::size_t q = 1; q < p; ++q) {
        twidx += fstride * k;
        twidx %= n_;
        acc += scratch[q] * tw[twidx];
      }
      out[k] = acc;
    }
  }
}

void fft2d_inplace(Spectrum& grid, Direction dir) {
  const std::size_t height = grid.height();
  const std::size_t width = grid.width();
  if (height == 0 || width == 0) {
    throw DimensionError("2D transform of an empty grid");
  }
  const FftPlan row_plan(width);
  std::vector<Complex> buffer(std::max(height, width));
  for (std::size_t h = 0; h < height; ++h) {
    Complex* row = grid.data() + h * width;
    row_plan.transform(row, 1, buffer.data(), dir);
    std::copy_n(buffer.data(), width, row);
  }
  const FftPlan col_plan(height);
  for (std::size_t w = 0; w < width; ++w) {
    Complex* col = grid.data() + w;
    col_plan.transform(col, static_cast<std::ptrdiff_t>(width), buffer.data(),
                       dir);
    for (std::size_t h = 0; h < height; ++h) col[h * width] = buffer[h];
  }
}

Spectrum dft2d_forward(const Plane& plane) {
  if (plane.empty()) throw DimensionError("forward DFT of an empty plane");
  Spectrum spec(plane.height(), plane.width());
  const auto src = plane.values();
  auto dst = spec.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = Complex(src[i], 0.0);
  fft2d_inplace(spec, Direction::kForward);
  return spec;
}

InverseResult dft2d_inverse(const Spectrum& spectrum) {
  if (spectrum.empty()) throw DimensionError("inverse DFT of an empty spectrum");
  Spectrum work = spectrum;
  fft2d_inplace(work, Direction::kInverse);
  const double scale =
      1.0 / static_cast<double>(spectrum.height() * spectrum.width());
  InverseResult result{Plane(spectrum.height(), spectrum.width()), 0.0};
  auto dst = result.plane.values();
  const auto src = work.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i].real() * scale;
    result.imag_residual =
        std::max(result.imag_residual, std::abs(src[i].imag() * scale));
  }
  return result;
}

}  // namespace fdakit
