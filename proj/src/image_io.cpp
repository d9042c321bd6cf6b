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

#include "fdakit/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace fdakit {
namespace {

struct PngReader {
  png_image image;

  explicit PngReader(const std::filesystem::path& path) {
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
      const std::string why = image.message;
      png_image_free(&image);
      throw IoError(path.string() + ": cannot decode PNG (" + why + ")");
    }
  }
  ~PngReader() { png_image_free(&image); }

  std::vector<std::uint8_t> finish(const std::filesystem::path& path,
                                   png_uint_32 format) {
    image.format = format;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
      throw IoError(path.string() + ": PNG decode failed (" +
                    std::string(image.message) + ")");
    }
    return buffer;
  }
};

void write_png(const std::filesystem::path& path, std::uint32_t width,
               std::uint32_t height, png_uint_32 format,
               const std::vector<std::uint8_t>& pixels) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = width;
  image.height = height;
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0,
                               nullptr)) {
    const std::string why = image.message;
    png_image_free(&image);
    throw IoError(path.string() + ": cannot write PNG (" + why + ")");
  }
}

}  // namespace

std::uint8_t quantize_sample(double value) {
  if (!(value > 0.0)) return 0;  // also maps NaN to 0
  if (value >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(value));
}

ImageTensor load_image(const std::filesystem::path& path) {
  PngReader reader(path);
  const auto buffer = reader.finish(path, PNG_FORMAT_RGB);
  const std::size_t h = reader.image.height;
  const std::size_t w = reader.image.width;
  ImageTensor img(h, w, 3);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t base = (y * w + x) * 3;
      for (std::size_t c = 0; c < 3; ++c) img(c, y, x) = buffer[base + c];
    }
  }
  return img;
}

void save_image(const ImageTensor& img, const std::filesystem::path& path) {
  const std::size_t channels = img.channels();
  if (channels != 1 && channels != 3) {
    throw DimensionError("can only encode 1- or 3-channel images, got " +
                         std::to_string(channels));
  }
  if (img.height() == 0 || img.width() == 0) {
    throw DimensionError("cannot encode an empty image");
  }
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  std::vector<std::uint8_t> pixels(h * w * channels);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        pixels[(y * w + x) * channels + c] = quantize_sample(img(c, y, x));
      }
    }
  }
  write_png(path, static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h),
            channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB, pixels);
}

LabelMap load_labels(const std::filesystem::path& path) {
  PngReader reader(path);
  const png_uint_32 fmt = reader.image.format;
  if ((fmt & PNG_FORMAT_FLAG_COLOR) != 0 || (fmt & PNG_FORMAT_FLAG_LINEAR) != 0 ||
      (fmt & PNG_FORMAT_FLAG_COLORMAP) != 0) {
    throw FormatError(path.string() +
                      ": label files must be 8-bit single-channel PNGs");
  }
  const auto buffer = reader.finish(path, PNG_FORMAT_GRAY);
  return LabelMap(reader.image.height, reader.image.width,
                  std::vector<std::uint8_t>(buffer.begin(), buffer.end()));
}

void save_labels(const LabelMap& labels, const std::filesystem::path& path) {
  if (labels.empty()) throw DimensionError("cannot encode an empty label map");
  write_png(path, static_cast<std::uint32_t>(labels.width()),
            static_cast<std::uint32_t>(labels.height()), PNG_FORMAT_GRAY,
            std::vector<std::uint8_t>(labels.values().begin(),
                                      labels.values().end()));
}

}  // namespace fdakit
