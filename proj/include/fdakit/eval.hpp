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

#ifndef FDAKIT_EVAL_HPP_
#define FDAKIT_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdakit/grid.hpp"

namespace fdakit {

// counts(g, p) = pixels with ground truth g predicted as p.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes);

  std::size_t classes() const { return classes_; }
  std::uint64_t count(std::size_t gt, std::size_t pred) const {
    return counts_[gt * classes_ + pred];
  }
  std::uint64_t& count(std::size_t gt, std::size_t pred) {
    return counts_[gt * classes_ + pred];
  }
  std::uint64_t ignored_pixels() const { return ignored_; }
  void add_ignored(std::uint64_t n) { ignored_ += n; }

  std::uint64_t row_sum(std::size_t gt) const;
  std::uint64_t col_sum(std::size_t pred) const;
  // Sum of counts plus ignored pixels.
  std::uint64_t total() const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t classes_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t ignored_ = 0;
};

// Adds one prediction/ground-truth pair. A pixel whose ground truth or
// prediction is 255 only increments ignored_pixels. Any other label >= K
// throws DataError naming the pixel.
void confusion_accumulate(const LabelMap& pred, const LabelMap& gt,
                          ConfusionMatrix& cm);

struct ClassIouReport {
  // Per-class IoU in [0, 1]; nullopt when the class is absent from both the
  // ground truth and the predictions.
  std::vector<std::optional<double>> per_class;
  std::optional<double> miou;
  std::vector<std::string> class_names;
};

// Mean over the defined entries; nullopt if none is defined.
std::optional<double> mean_iou(std::span<const std::optional<double>> values);

ClassIouReport class_iou(const ConfusionMatrix& cm);
ClassIouReport class_iou(const ConfusionMatrix& cm,
                         std::vector<std::string> class_names);

// The 19 evaluation classes (road ... bicycle) for K = 19, the 16-class
// subset for K = 16, "class_<k>" otherwise.
std::vector<std::string> default_class_names(std::size_t classes);

// 100 * (reference - measured) / reference. Negative when measured is higher.
double relative_error(double reference, double measured);

struct ErrorRow {
  std::string experiment;
  double reference = 0.0;
  std::optional<double> measured;
  // Error printed in a published table, used only to annotate mismatches.
  std::optional<double> published_error;
};

enum class ReportFormat { kText, kCsv };

// Columns: experiment, reference mIoU, measured mIoU, error %. When a row
// carries a published error that differs from the recomputed one by more
// than `tolerance` points, a trailing note flags it.
std::string emit_report(std::span<const ErrorRow> rows, ReportFormat format,
                        double tolerance = 0.05);

std::string render_class_report(const ClassIouReport& report,
                                 ReportFormat format);

}  // namespace fdakit

#endif  // FDAKIT_EVAL_HPP_
