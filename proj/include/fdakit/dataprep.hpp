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

#ifndef FDAKIT_DATAPREP_HPP_
#define FDAKIT_DATAPREP_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fdakit/grid.hpp"
#include "fdakit/image.hpp"
#include "fdakit/rng.hpp"

namespace fdakit {

struct Extent {
  std::size_t width = 0;
  std::size_t height = 0;
};

struct PrepConfig {
  Extent resize_to{1280, 720};
  Extent crop_to{1024, 512};
  std::uint64_t seed = 0;
  std::uint64_t pairing_seed = 0;

  // Crop must fit inside the resized frame; all extents positive.
  void validate() const;
};

struct Offset {
  std::size_t x = 0;
  std::size_t y = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

// Align-corners bilinear resampling with edge clamping. Output is exactly
// height x width; a one-pixel axis samples coordinate 0.
ImageTensor resize_bilinear(const ImageTensor& img, std::size_t width,
                            std::size_t height);

// Nearest-neighbour resampling for label rasters (never mixes classes).
LabelMap resize_nearest(const LabelMap& labels, std::size_t width,
                        std::size_t height);

ImageTensor crop(const ImageTensor& img, Offset offset, std::size_t width,
                 std::size_t height);
LabelMap crop(const LabelMap& labels, Offset offset, std::size_t width,
              std::size_t height);

struct CropResult {
  ImageTensor image;
  Offset offset;
};

// Draws x then y uniformly from the valid offset range.
CropResult random_crop(const ImageTensor& img, std::size_t width,
                       std::size_t height, RngStream& rng);

// Resize to cfg.resize_to, then random-crop to cfg.crop_to.
CropResult prepare_image(const ImageTensor& img, const PrepConfig& cfg,
                         RngStream& rng);

// Pairs every source id with a target id drawn uniformly with replacement.
// Each draw comes from the stream (pairing_seed, "pair:" + source_id).
std::vector<std::pair<std::string, std::string>> pair_source_target(
    std::span<const std::string> source_ids,
    std::span<const std::string> target_ids, std::uint64_t pairing_seed);

// Total lookup table over 8-bit class ids; unmapped ids go to 255.
class LabelRemap {
 public:
  LabelRemap() { table_.fill(kIgnoreLabel); }

  static LabelRemap identity();

  void set(std::uint8_t from, std::uint8_t to) { table_[from] = to; }
  std::uint8_t operator[](std::uint8_t id) const { return table_[id]; }
  const std::array<std::uint8_t, 256>& table() const { return table_; }

 private:
  std::array<std::uint8_t, 256> table_;
};

// Plain text, one "source_id target_id" pair per line, '#' starts a comment.
LabelRemap load_label_remap(const std::filesystem::path& path);
LabelRemap parse_label_remap(const std::string& text,
                             const std::string& origin = "<remap>");

LabelMap remap_labels(const LabelMap& labels, const LabelRemap& remap);

}  // namespace fdakit

#endif  // FDAKIT_DATAPREP_HPP_
