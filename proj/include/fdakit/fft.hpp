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

#ifndef FDAKIT_FFT_HPP_
#define FDAKIT_FFT_HPP_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fdakit/grid.hpp"

namespace fdakit {

using Complex = std::complex<double>;

enum class Direction { kForward, kInverse };

// Unnormalized one-dimensional DFT of a fixed length, any length >= 1.
//
// Lengths whose prime factors are all <= kMaxDirectRadix run as a mixed-radix
// decimation-in-time Cooley-Tukey transform (specialized radix-2 and radix-4
// butterflies, generic butterflies otherwise). Lengths with a larger prime
// factor are evaluated with Bluestein's chirp-z algorithm on top of a
// power-of-two plan.
//
// Forward uses exp(-2*pi*i*k*n/N), inverse exp(+2*pi*i*k*n/N); neither scales.
// A plan is immutable after construction and may be shared between threads.
class FftPlan {
 public:
  static constexpr std::size_t kMaxDirectRadix = 31;

  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  bool uses_bluestein() const { return bluestein_ != nullptr; }
  const std::vector<std::size_t>& radices() const { return radices_; }

  // Out-of-place transform. `in` is read with the given element stride,
  // `out` receives size() contiguous values. `in` and `out` must not alias.
  void transform(const Complex* in, std::ptrdiff_t in_stride, Complex* out,
                 Direction dir) const;

  void transform(std::span<const Complex> in, std::span<Complex> out,
                 Direction dir) const;

 private:
  struct Bluestein;

  void work(Complex* out, const Complex* in, std::size_t fstride,
            std::ptrdiff_t in_stride, std::size_t stage, Direction dir) const;
  void butterfly2(Complex* out, std::size_t fstride, std::size_t m,
                  const std::vector<Complex>& tw) const;
  void butterfly4(Complex* out, std::size_t fstride, std::size_t m,
                  const std::vector<Complex>& tw, Direction dir) const;
  void butterfly_generic(Complex* out, std::size_t fstride, std::size_t p,
                         std::size_t m, const std::vector<Complex>& tw) const;

  std::size_t n_;
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> remainders_;
  std::vector<Complex> twiddles_fwd_;
  std::vector<Complex> twiddles_inv_;
  std::shared_ptr<const Bluestein> bluestein_;
};

// Two-dimensional unnormalized forward DFT of a real plane, DC at (0, 0):
//   X(m, n) = sum_{h,w} x(h, w) exp(-2*pi*i*(h*m/H + w*n/W)).
Spectrum dft2d_forward(const Plane& plane);

struct InverseResult {
  Plane plane;
  // Largest |imag| discarded when taking the real part.
  double imag_residual = 0.0;
};

// Inverse of dft2d_forward, scaled by 1/(H*W), real part kept.
InverseResult dft2d_inverse(const Spectrum& spectrum);

// In-place complex 2D transform (rows, then columns). No scaling.
void fft2d_inplace(Spectrum& grid, Direction dir);

}  // namespace fdakit

#endif  // FDAKIT_FFT_HPP_
