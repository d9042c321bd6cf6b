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

#include "fdakit/dataprep.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fdakit {
namespace {

// Align-corners source coordinate of output index i.
double source_coord(std::size_t i, std::size_t in, std::size_t out) {
  if (out == 1 || in == 1) return 0.0;
  return static_cast<double>(i) * static_cast<double>(in - 1) /
         static_cast<double>(out - 1);
}

void check_extent(std::size_t width, std::size_t height, const char* what) {
  if (width == 0 || height == 0) {
    throw ParameterError(std::string(what) + " dimensions must be positive, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
}

template <typename T>
Grid<T> crop_grid(const Grid<T>& g, Offset o, std::size_t width,
                  std::size_t height) {
  if (o.x + width > g.width() || o.y + height > g.height()) {
    throw DimensionError("crop " + std::to_string(width) + "x" +
                         std::to_string(height) + " at (" + std::to_string(o.x) +
                         ", " + std::to_string(o.y) + ") exceeds " +
                         std::to_string(g.width()) + "x" +
                         std::to_string(g.height()));
  }
  Grid<T> out(height, width);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) out(y, x) = g(o.y + y, o.x + x);
  }
  return out;
}

}  // namespace

void PrepConfig::validate() const {
  check_extent(resize_to.width, resize_to.height, "resize");
  check_extent(crop_to.width, crop_to.height, "crop");
  if (crop_to.width > resize_to.width || crop_to.height > resize_to.height) {
    throw ParameterError("crop " + std::to_string(crop_to.width) + "x" +
                         std::to_string(crop_to.height) +
                         " does not fit in resize " +
                         std::to_string(resize_to.width) + "x" +
                         std::to_string(resize_to.height));
  }
}

ImageTensor resize_bilinear(const ImageTensor& img, std::size_t width,
                            std::size_t height) {
  check_extent(width, height, "resize");
  img.validate();
  const std::size_t in_w = img.width();
  const std::size_t in_h = img.height();

  std::vector<std::size_t> x0(width), x1(width);
  std::vector<double> fx(width);
  for (std::size_t x = 0; x < width; ++x) {
    const double sx = source_coord(x, in_w, width);
    x0[x] = std::min(static_cast<std::size_t>(std::floor(sx)), in_w - 1);
    x1[x] = std::min(x0[x] + 1, in_w - 1);
    fx[x] = sx - static_cast<double>(x0[x]);
  }

  ImageTensor out(height, width, img.channels());
  for (std::size_t c = 0; c < img.channels(); ++c) {
    const Plane& src = img.plane(c);
    Plane& dst = out.plane(c);
    for (std::size_t y = 0; y < height; ++y) {
      const double sy = source_coord(y, in_h, height);
      const std::size_t y0 =
          std::min(static_cast<std::size_t>(std::floor(sy)), in_h - 1);
      const std::size_t y1 = std::min(y0 + 1, in_h - 1);
      const double fy = sy - static_cast<double>(y0);
      for (std::size_t x = 0; x < width; ++x) {
        const double top =
            src(y0, x0[x]) * (1.0 - fx[x]) + src(y0, x1[x]) * fx[x];
        const double bottom =
            src(y1, x0[x]) * (1.0 - fx[x]) + src(y1, x1[x]) * fx[x];
        dst(y, x) = top * (1.0 - fy) + bottom * fy;
      }
    }
  }
  return out;
}

LabelMap resize_nearest(const LabelMap& labels, std::size_t width,
                        std::size_t height) {
  check_extent(width, height, "resize");
  if (labels.empty()) throw DimensionError("cannot resize an empty label map");
  LabelMap out(height, width);
  for (std::size_t y = 0; y < height; ++y) {
    const auto sy = static_cast<std::size_t>(
        std::lround(source_coord(y, labels.height(), height)));
    for (std::size_t x = 0; x < width; ++x) {
      const auto sx = static_cast<std::size_t>(
          std::lround(source_coord(x, labels.width(), width)));
      out(y, x) = labels(sy, sx);
    }
  }
  return out;
}

ImageTensor crop(const ImageTensor& img, Offset offset, std::size_t width,
                 std::size_t height) {
  std::vector<Plane> planes;
  planes.reserve(img.channels());
  for (std::size_t c = 0; c < img.channels(); ++c) {
    planes.push_back(crop_grid(img.plane(c), offset, width, height));
  }
  return ImageTensor(std::move(planes));
}

LabelMap crop(const LabelMap& labels, Offset offset, std::size_t width,
              std::size_t height) {
  return crop_grid(labels, offset, width, height);
}

CropResult random_crop(const ImageTensor& img, std::size_t width,
                       std::size_t height, RngStream& rng) {
  check_extent(width, height, "crop");
  if (width > img.width() || height > img.height()) {
    throw DimensionError("crop " + std::to_string(width) + "x" +
                         std::to_string(height) + " larger than image " +
                         std::to_string(img.width()) + "x" +
                         std::to_string(img.height()));
  }
  Offset offset;
  offset.x = rng.uniform_below(img.width() - width + 1);
  offset.y = rng.uniform_below(img.height() - height + 1);
  return {crop(img, offset, width, height), offset};
}

CropResult prepare_image(const ImageTensor& img, const PrepConfig& cfg,
                         RngStream& rng) {
  cfg.validate();
  const ImageTensor resized =
      resize_bilinear(img, cfg.resize_to.width, cfg.resize_to.height);
  return random_crop(resized, cfg.crop_to.width, cfg.crop_to.height, rng);
}

std::vector<std::pair<std::string, std::string>> pair_source_target(
    std::span<const std::string> source_ids,
    std::span<const std::string> target_ids, std::uint64_t pairing_seed) {
  if (source_ids.empty()) throw ParameterError("no source ids to pair");
  if (target_ids.empty()) throw ParameterError("no target ids to pair with");
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(source_ids.size());
  for (const auto& src : source_ids) {
    RngStream rng(pairing_seed, "pair:" + src);
    pairs.emplace_back(src, target_ids[rng.uniform_below(target_ids.size())]);
  }
  return pairs;
}

LabelRemap LabelRemap::identity() {
  LabelRemap r;
  for (std::size_t i = 0; i < 256; ++i) {
    r.table_[i] = static_cast<std::uint8_t>(i);
  }
  return r;
}

LabelRemap parse_label_remap(const std::string& text, const std::string& origin) {
  LabelRemap remap;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long from = 0;
    long to = 0;
    std::string extra;
    if (!(fields >> from) || !(fields >> to) || (fields >> extra) || from < 0 || from > 255 ||
        to < 0 || to > 255) {
      throw FormatError(origin + ":" + std::to_string(line_no) +
                        ": expected two ids in [0, 255]");
    }
    remap.set(static_cast<std::uint8_t>(from), static_cast<std::uint8_t>(to));
  }
  return remap;
}

LabelRemap load_label_remap(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open remap table");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_label_remap(text.str(), path.string());
}

LabelMap remap_labels(const LabelMap& labels, const LabelRemap& remap) {
  LabelMap out = labels;
  for (auto& v : out.values()) v = remap[v];
  return out;
}

}  // namespace fdakit
