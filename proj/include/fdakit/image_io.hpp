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

#ifndef FDAKIT_IMAGE_IO_HPP_
#define FDAKIT_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>

#include "fdakit/grid.hpp"
#include "fdakit/image.hpp"

namespace fdakit {

// PNG codecs. Images load as three planes of the integer sample values;
// grayscale and palette files are expanded to RGB.
ImageTensor load_image(const std::filesystem::path& path);

// Writes 1-channel tensors as grayscale and 3-channel tensors as RGB. Samples
// are rounded half away from zero and clamped to [0, 255].
void save_image(const ImageTensor& img, const std::filesystem::path& path);

std::uint8_t quantize_sample(double value);

// Label rasters are single-channel 8-bit PNGs; pixel value = class id.
LabelMap load_labels(const std::filesystem::path& path);
void save_labels(const LabelMap& labels, const std::filesystem::path& path);

}  // namespace fdakit

#endif  // FDAKIT_IMAGE_IO_HPP_
