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

#include "fdakit/image.hpp"

#include <cmath>
#include <string>

namespace fdakit {

ImageTensor::ImageTensor(std::size_t height, std::size_t width,
                         std::size_t channels, double fill)
    : height_(height), width_(width) {
  planes_.reserve(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    planes_.emplace_back(height, width, fill);
  }
}

ImageTensor::ImageTensor(std::vector<Plane> planes)
    : planes_(std::move(planes)) {
  if (planes_.empty()) throw DimensionError("image needs at least one plane");
  height_ = planes_.front().height();
  width_ = planes_.front().width();
  for (const auto& p : planes_) {
    if (!p.same_shape(planes_.front())) {
      throw DimensionError("image planes differ in shape");
    }
  }
}

void ImageTensor::validate() const {
  if (height_ == 0 || width_ == 0 || planes_.empty()) {
    throw DimensionError("image is empty (" + std::to_string(height_) + "x" +
                         std::to_string(width_) + "x" +
                         std::to_string(planes_.size()) + ")");
  }
  for (std::size_t c = 0; c < planes_.size(); ++c) {
    for (double v : planes_[c].values()) {
      if (!std::isfinite(v)) {
        throw DomainError("non-finite sample in channel " + std::to_string(c));
      }
    }
  }
}

double max_abs_diff(const ImageTensor& a, const ImageTensor& b) {
  if (!a.same_shape(b)) throw DimensionError("max_abs_diff: shape mismatch");
  double worst = 0.0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    const auto pa = a.plane(c).values();
    const auto pb = b.plane(c).values();
    for (std::size_t i = 0; i < pa.size(); ++i) {
      worst = std::max(worst, std::abs(pa[i] - pb[i]));
    }
  }
  return worst;
}

double l2_distance(const ImageTensor& a, const ImageTensor& b) {
  if (!a.same_shape(b)) throw DimensionError("l2_distance: shape mismatch");
  double sum = 0.0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    const auto pa = a.plane(c).values();
    const auto pb = b.plane(c).values();
    for (std::size_t i = 0; i < pa.size(); ++i) {
      const double d = pa[i] - pb[i];
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

double channel_mean(const ImageTensor& img, std::size_t channel) {
  const auto values = img.plane(channel).values();
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

}  // namespace fdakit
