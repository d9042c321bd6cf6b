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

#ifndef FDAKIT_GRID_HPP_
#define FDAKIT_GRID_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fdakit/error.hpp"

namespace fdakit {

// Dense row-major height x width array.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(height * width, fill) {}
  Grid(std::size_t height, std::size_t width, std::vector<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (data_.size() != height_ * width_) {
      throw DimensionError("grid data size does not match " +
                           std::to_string(height_) + "x" +
                           std::to_string(width_));
    }
  }

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t h, std::size_t w) { return data_[h * width_ + w]; }
  const T& operator()(std::size_t h, std::size_t w) const {
    return data_[h * width_ + w];
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool same_shape(const Grid& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
};

using Plane = Grid<double>;
using Spectrum = Grid<std::complex<double>>;

// Class index raster; 255 marks ignored pixels.
using LabelMap = Grid<std::uint8_t>;
inline constexpr std::uint8_t kIgnoreLabel = 255;

}  // namespace fdakit

#endif  // FDAKIT_GRID_HPP_
