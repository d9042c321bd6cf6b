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

#ifndef FDAKIT_PROBMAP_HPP_
#define FDAKIT_PROBMAP_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "fdakit/error.hpp"

namespace fdakit {

// Per-pixel class scores, stored as K contiguous H x W planes.
class ProbMap {
 public:
  ProbMap() = default;
  ProbMap(std::size_t height, std::size_t width, std::size_t classes,
          bool normalized = false);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t classes() const { return classes_; }
  std::size_t pixels() const { return height_ * width_; }
  std::size_t size() const { return scores_.size(); }
  std::size_t byte_size() const { return scores_.size() * sizeof(double); }

  bool normalized() const { return normalized_; }
  void set_normalized(bool v) { normalized_ = v; }

  double& score(std::size_t k, std::size_t h, std::size_t w) {
    return scores_[(k * height_ + h) * width_ + w];
  }
  double score(std::size_t k, std::size_t h, std::size_t w) const {
    return scores_[(k * height_ + h) * width_ + w];
  }
  // Score of class k at flat pixel index p.
  double at(std::size_t k, std::size_t p) const {
    return scores_[k * pixels() + p];
  }

  std::span<double> plane(std::size_t k) {
    return std::span<double>(scores_).subspan(k * pixels(), pixels());
  }
  std::span<const double> plane(std::size_t k) const {
    return std::span<const double>(scores_).subspan(k * pixels(), pixels());
  }
  std::span<double> values() { return scores_; }
  std::span<const double> values() const { return scores_; }

  bool same_shape(const ProbMap& o) const {
    return height_ == o.height_ && width_ == o.width_ && classes_ == o.classes_;
  }

  // Reshapes in place, reusing the existing allocation when large enough.
  void reshape(std::size_t height, std::size_t width, std::size_t classes);

  // Checks nonnegativity and finiteness, and per-pixel sums within `tol`
  // when the map is flagged normalized. Throws DomainError.
  void validate(double tol = 1e-5) const;

  friend bool operator==(const ProbMap&, const ProbMap&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t classes_ = 0;
  bool normalized_ = false;
  std::vector<double> scores_;
};

}  // namespace fdakit

#endif  // FDAKIT_PROBMAP_HPP_
