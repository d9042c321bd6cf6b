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

#ifndef FDAKIT_FUSION_HPP_
#define FDAKIT_FUSION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fdakit/grid.hpp"
#include "fdakit/probmap.hpp"

namespace fdakit {

// A map tagged with the index of the model that produced it. Summation runs
// in ascending model index, so reordering the list never changes the mean.
struct IndexedProbMap {
  std::size_t model_index = 0;
  const ProbMap* map = nullptr;
};

// Elementwise mean of M maps: running sum in model order, one division by M
// at the end. The result is flagged normalized iff every input is.
ProbMap mbt_mean(std::span<const ProbMap> maps);
ProbMap mbt_mean(std::span<const IndexedProbMap> maps);

// Building blocks shared by the in-memory and streaming paths so both produce
// the same bits.
void accumulate_scores(ProbMap& sum, const ProbMap& next);
void finalize_mean(ProbMap& sum, std::size_t model_count);

// Smallest class index attaining the per-pixel maximum.
LabelMap argmax_labels(const ProbMap& map);

// Confidence gate for pseudo-labels. Exactly one mode is active.
struct GatePolicy {
  enum class Mode { kGlobalThreshold, kPerClassTopFraction };

  Mode mode = Mode::kGlobalThreshold;
  double threshold = 0.9;
  double top_fraction = 1.0;

  static GatePolicy global(double threshold);
  static GatePolicy per_class(double top_fraction);

  // Throws ParameterError when the active parameter is out of range.
  void validate() const;
};

// Argmax labels with low-confidence pixels replaced by kIgnoreLabel.
//
// Global mode keeps a pixel iff its winning score >= threshold. Per-class mode
// ranks the pixels won by each class by score (ties by row-major order) and
// keeps the first ceil(top_fraction * count) of them.
LabelMap pseudo_labels(const ProbMap& map, const GatePolicy& gate);

}  // namespace fdakit

#endif  // FDAKIT_FUSION_HPP_
