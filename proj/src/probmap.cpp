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

#include "fdakit/probmap.hpp"

#include <cmath>
#include <sstream>

namespace fdakit {

ProbMap::ProbMap(std::size_t height, std::size_t width, std::size_t classes,
                 bool normalized)
    : height_(height),
      width_(width),
      classes_(classes),
      normalized_(normalized),
      scores_(height * width * classes, 0.0) {}

void ProbMap::reshape(std::size_t height, std::size_t width,
                      std::size_t classes) {
  height_ = height;
  width_ = width;
  classes_ = classes;
  scores_.resize(height * width * classes);
}

void ProbMap::validate(double tol) const {
  if (classes_ == 0 || pixels() == 0) {
    throw DimensionError("probability map is empty");
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!std::isfinite(scores_[i]) || scores_[i] < 0.0) {
      std::ostringstream msg;
      msg << "invalid score " << scores_[i] << " in class "
          << i / pixels() << " at pixel " << i % pixels();
      throw DomainError(msg.str());
    }
  }
  if (!normalized_) return;
  for (std::size_t p = 0; p < pixels(); ++p) {
    double sum = 0.0;
    for (std::size_t k = 0; k < classes_; ++k) sum += at(k, p);
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << "map flagged normalized but pixel " << p << " sums to " << sum;
      throw DomainError(msg.str());
    }
  }
}

}  // namespace fdakit
