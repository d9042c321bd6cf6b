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

#include "fdakit/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fdakit {

void accumulate_scores(ProbMap& sum, const ProbMap& next) {
  if (!sum.same_shape(next)) {
    std::ostringstream msg;
    msg << "probability map shape " << next.height() << "x" << next.width()
        << "x" << next.classes() << " does not match " << sum.height() << "x"
        << sum.width() << "x" << sum.classes();
    throw DimensionError(msg.str());
  }
  auto dst = sum.values();
  const auto src = next.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  sum.set_normalized(sum.normalized() && next.normalized());
}

void finalize_mean(ProbMap& sum, std::size_t model_count) {
  const auto m = static_cast<double>(model_count);
  for (double& v : sum.values()) v /= m;
}

ProbMap mbt_mean(std::span<const IndexedProbMap> maps) {
  if (maps.empty()) throw ParameterError("mbt_mean needs at least one map");
  std::vector<IndexedProbMap> ordered(maps.begin(), maps.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const IndexedProbMap& a, const IndexedProbMap& b) {
                     return a.model_index < b.model_index;
                   });
  ProbMap sum = *ordered.front().map;
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    accumulate_scores(sum, *ordered[i].map);
  }
  finalize_mean(sum, ordered.size());
  return sum;
}

ProbMap mbt_mean(std::span<const ProbMap> maps) {
  std::vector<IndexedProbMap> indexed;
  indexed.reserve(maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    indexed.push_back({i, &maps[i]});
  }
  return mbt_mean(std::span<const IndexedProbMap>(indexed));
}

LabelMap argmax_labels(const ProbMap& map) {
  if (map.classes() == 0) throw DimensionError("map has no classes");
  if (map.classes() > kIgnoreLabel) {
    throw DimensionError("class count " + std::to_string(map.classes()) +
                         " collides with the ignore label");
  }
  LabelMap labels(map.height(), map.width(), 0);
  std::vector<double> best(map.plane(0).begin(), map.plane(0).end());
  auto out = labels.values();
  for (std::size_t k = 1; k < map.classes(); ++k) {
    const auto scores = map.plane(k);
    for (std::size_t p = 0; p < scores.size(); ++p) {
      if (scores[p] > best[p]) {
        best[p] = scores[p];
        out[p] = static_cast<std::uint8_t>(k);
      }
    }
  }
  return labels;
}

GatePolicy GatePolicy::global(double threshold) {
  GatePolicy g;
  g.mode = Mode::kGlobalThreshold;
  g.threshold = threshold;
  return g;
}

GatePolicy GatePolicy::per_class(double top_fraction) {
  GatePolicy g;
  g.mode = Mode::kPerClassTopFraction;
  g.top_fraction = top_fraction;
  return g;
}

void GatePolicy::validate() const {
  std::ostringstream msg;
  if (mode == Mode::kGlobalThreshold && !(threshold >= 0.0 && threshold <= 1.0)) {
    msg << "threshold must lie in [0, 1], got " << threshold;
    throw ParameterError(msg.str());
  }
  if (mode == Mode::kPerClassTopFraction &&
      !(top_fraction > 0.0 && top_fraction <= 1.0)) {
    msg << "top fraction must lie in (0, 1], got " << top_fraction;
    throw ParameterError(msg.str());
  }
}

namespace {

// ceil(fraction * count), snapping products that are integral up to
// rounding noise (0.4 * 10 evaluates to 4.000000000000001).
std::size_t kept_count(double fraction, std::size_t count) {
  const double exact = fraction * static_cast<double>(count);
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(exact));
}

}  // namespace

LabelMap pseudo_labels(const ProbMap& map, const GatePolicy& gate) {
  gate.validate();
  if (!map.normalized()) {
    throw PreconditionError("pseudo_labels requires a normalized map");
  }
  LabelMap labels = argmax_labels(map);
  auto out = labels.values();
  const std::size_t pixels = map.pixels();

  if (gate.mode == GatePolicy::Mode::kGlobalThreshold) {
    for (std::size_t p = 0; p < pixels; ++p) {
      if (!(map.at(out[p], p) >= gate.threshold)) out[p] = kIgnoreLabel;
    }
    return labels;
  }

  std::vector<std::vector<std::size_t>> won(map.classes());
  for (std::size_t p = 0; p < pixels; ++p) won[out[p]].push_back(p);
  for (std::size_t k = 0; k < map.classes(); ++k) {
    auto& members = won[k];
    std::stable_sort(members.begin(), members.end(),
                     [&](std::size_t a, std::size_t b) {
                       return map.at(k, a) > map.at(k, b);
                     });
    const std::size_t keep = kept_count(gate.top_fraction, members.size());
    for (std::size_t i = keep; i < members.size(); ++i) {
      out[members[i]] = kIgnoreLabel;
    }
  }
  return labels;
}

}  // namespace fdakit
