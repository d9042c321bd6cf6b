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

#include "fdakit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fdakit/error.hpp"

namespace fdakit {
namespace {

constexpr const char* kUndefined = "\xE2\x80\x94";  // em dash

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Display width of a UTF-8 string, counting code points.
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t width, bool left_align) {
  const std::size_t w = display_width(s);
  if (w >= width) return s;
  const std::string fill(width - w, ' ');
  return left_align ? s + fill : fill + s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string render_table(const std::vector<std::vector<std::string>>& rows,
                         ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << csv_field(row[i]);
      }
      out << '\n';
    }
    return out.str();
  }
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], display_width(row[i]));
    }
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += pad(row[i], widths[i], i == 0);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t classes)
    : classes_(classes), counts_(classes * classes, 0) {
  if (classes == 0 || classes > kIgnoreLabel) {
    throw ParameterError("class count must lie in [1, 254], got " +
                         std::to_string(classes));
  }
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t gt) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < classes_; ++p) s += count(gt, p);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t pred) const {
  std::uint64_t s = 0;
  for (std::size_t g = 0; g < classes_; ++g) s += count(g, pred);
  return s;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t s = ignored_;
  for (auto c : counts_) s += c;
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) {
    throw DimensionError("cannot merge confusion matrices of " +
                         std::to_string(classes_) + " and " +
                         std::to_string(other.classes_) + " classes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  ignored_ += other.ignored_;
  return *this;
}

void confusion_accumulate(const LabelMap& pred, const LabelMap& gt,
                          ConfusionMatrix& cm) {
  if (!pred.same_shape(gt)) {
    throw DimensionError("prediction " + std::to_string(pred.height()) + "x" +
                         std::to_string(pred.width()) + " vs ground truth " +
                         std::to_string(gt.height()) + "x" +
                         std::to_string(gt.width()));
  }
  const std::size_t k = cm.classes();
  // Validate first so a bad pixel leaves `cm` untouched.
  for (std::size_t h = 0; h < gt.height(); ++h) {
    for (std::size_t w = 0; w < gt.width(); ++w) {
      for (const auto* side : {&gt, &pred}) {
        const std::uint8_t v = (*side)(h, w);
        if (v != kIgnoreLabel && v >= k) {
          throw DataError(std::string(side == &gt ? "ground-truth" : "predicted") +
                          " label " + std::to_string(v) + " at pixel (" +
                          std::to_string(h) + ", " + std::to_string(w) +
                          ") is not below " + std::to_string(k));
        }
      }
    }
  }
  const auto g = gt.values();
  const auto p = pred.values();
  std::uint64_t ignored = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == kIgnoreLabel || p[i] == kIgnoreLabel) {
      ++ignored;
    } else {
      ++cm.count(g[i], p[i]);
    }
  }
  cm.add_ignored(ignored);
}

std::optional<double> mean_iou(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

ClassIouReport class_iou(const ConfusionMatrix& cm,
                         std::vector<std::string> class_names) {
  if (class_names.size() != cm.classes()) {
    throw DimensionError("expected " + std::to_string(cm.classes()) +
                         " class names, got " +
                         std::to_string(class_names.size()));
  }
  ClassIouReport report;
  report.class_names = std::move(class_names);
  for (std::size_t k = 0; k < cm.classes(); ++k) {
    const std::uint64_t tp = cm.count(k, k);
    const std::uint64_t uni = cm.row_sum(k) + cm.col_sum(k) - tp;
    if (uni == 0) {
      report.per_class.push_back(std::nullopt);
    } else {
      report.per_class.push_back(static_cast<double>(tp) /
                                 static_cast<double>(uni));
    }
  }
  report.miou = mean_iou(report.per_class);
  return report;
}

ClassIouReport class_iou(const ConfusionMatrix& cm) {
  return class_iou(cm, default_class_names(cm.classes()));
}

std::vector<std::string> default_class_names(std::size_t classes) {
  if (classes == 19) {
    return {"road",       "sidewalk", "building", "wall",  "fence",
            "pole",       "light",    "sign",     "vegetation",
            "terrain",    "sky",      "person",   "rider", "car",
            "truck",      "bus",      "train",    "motorcycle",
            "bicycle"};
  }
  if (classes == 16) {
    return {"road",  "sidewalk", "building", "wall",  "fence",  "pole",
            "light", "sign",     "vegetation", "sky", "person", "rider",
            "car",   "bus",      "motorcycle", "bicycle"};
  }
  std::vector<std::string> names;
  for (std::size_t k = 0; k < classes; ++k) {
    names.push_back("class_" + std::to_string(k));
  }
  return names;
}

double relative_error(double reference, double measured) {
  if (!(reference > 0.0)) {
    std::ostringstream msg;
    msg << "reference mIoU must be positive, got " << reference;
    throw ParameterError(msg.str());
  }
  return 100.0 * (reference - measured) / reference;
}

std::string emit_report(std::span<const ErrorRow> rows, ReportFormat format,
                        double tolerance) {
  if (rows.empty()) throw ParameterError("report needs at least one row");
  std::vector<std::vector<std::string>> table;
  table.push_back({"experiment", "reference_miou", "measured_miou", "error_pct"});
  bool any_note = false;
  for (const auto& r : rows) {
    std::vector<std::string> line{r.experiment, fixed(r.reference, 2)};
    if (r.measured) {
      const double err = relative_error(r.reference, *r.measured);
      line.push_back(fixed(*r.measured, 2));
      line.push_back(fixed(err, 2));
      if (r.published_error &&
          std::abs(*r.published_error - err) > tolerance) {
        line.push_back("published " + fixed(*r.published_error, 2) +
                       " does not match recomputed value");
        any_note = true;
      }
    } else {
      line.push_back(kUndefined);
      line.push_back(kUndefined);
    }
    table.push_back(std::move(line));
  }
  if (any_note) {
    table.front().push_back("note");
    for (auto& line : table) line.resize(5);
  }
  return render_table(table, format);
}

std::string render_class_report(const ClassIouReport& report,
                                 ReportFormat format) {
  std::vector<std::vector<std::string>> table;
  const bool csv = format == ReportFormat::kCsv;
  table.push_back({"class", csv ? "iou" : "IoU %"});
  auto cell = [&](const std::optional<double>& v) -> std::string {
    if (!v) return kUndefined;
    return csv ? fixed(*v, 6) : fixed(100.0 * *v, 2);
  };
  for (std::size_t k = 0; k < report.per_class.size(); ++k) {
    const std::string name =
        k < report.class_names.size() ? report.class_names[k] : std::to_string(k);
    table.push_back({name, cell(report.per_class[k])});
  }
  table.push_back({"mIoU", cell(report.miou)});
  return render_table(table, format);
}

}  // namespace fdakit
