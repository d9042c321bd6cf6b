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

#ifndef FDAKIT_IMAGE_HPP_
#define FDAKIT_IMAGE_HPP_

#include <cstddef>
#include <vector>

#include "fdakit/grid.hpp"

namespace fdakit {

// Planar multi-channel raster of real samples. Values nominally lie in
// [0, 255] but are never clamped in memory; clamping happens on encode.
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(std::size_t height, std::size_t width, std::size_t channels,
              double fill = 0.0);
  explicit ImageTensor(std::vector<Plane> planes);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t channels() const { return planes_.size(); }
  std::size_t sample_count() const { return height_ * width_ * channels(); }

  Plane& plane(std::size_t c) { return planes_.at(c); }
  const Plane& plane(std::size_t c) const { return planes_.at(c); }

  double& operator()(std::size_t c, std::size_t h, std::size_t w) {
    return planes_[c](h, w);
  }
  double operator()(std::size_t c, std::size_t h, std::size_t w) const {
    return planes_[c](h, w);
  }

  bool same_shape(const ImageTensor& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels() == other.channels();
  }

  // Throws DimensionError for empty images and DomainError for NaN/Inf.
  void validate() const;

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<Plane> planes_;
};

// Largest absolute per-sample difference. Shapes must match.
double max_abs_diff(const ImageTensor& a, const ImageTensor& b);

// Euclidean norm of a - b over every sample.
double l2_distance(const ImageTensor& a, const ImageTensor& b);

double channel_mean(const ImageTensor& img, std::size_t channel);

}  // namespace fdakit

#endif  // FDAKIT_IMAGE_HPP_
