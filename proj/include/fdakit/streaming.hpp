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

#ifndef FDAKIT_STREAMING_HPP_
#define FDAKIT_STREAMING_HPP_

#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "fdakit/fusion.hpp"

namespace fdakit {

struct ManifestEntry {
  std::string image_id;
  std::vector<std::filesystem::path> model_paths;
};

// Images to fuse, each with one cached probability map per model.
struct FusionManifest {
  std::vector<ManifestEntry> entries;
  std::size_t model_count = 0;
  std::size_t memory_budget = 0;

  // Every entry must list exactly model_count >= 1 paths and carry a usable
  // image id. Throws ParameterError.
  void validate() const;
};

// Parses `image_id<TAB>path_1<TAB>...<TAB>path_M` lines. Blank lines and
// lines starting with '#' are skipped; relative paths resolve against the
// manifest's directory. Throws FormatError naming the line.
FusionManifest read_fusion_manifest(const std::filesystem::path& path,
                                    std::size_t memory_budget);

void write_fusion_manifest(const FusionManifest& manifest,
                           const std::filesystem::path& path);

// Process-wide accounting of live tensor bytes against a fixed capacity.
//
// reserve() admits a unit of work only when its worst-case footprint fits in
// what is left of the capacity, blocking otherwise. charge()/release() record
// actual allocations so the peak can be reported.
class MemoryLedger {
 public:
  explicit MemoryLedger(std::size_t capacity) : capacity_(capacity) {}

  class Reservation {
   public:
    Reservation(MemoryLedger* ledger, std::size_t bytes)
        : ledger_(ledger), bytes_(bytes) {}
    Reservation(Reservation&& o) noexcept
        : ledger_(std::exchange(o.ledger_, nullptr)), bytes_(o.bytes_) {}
    Reservation(const Reservation&) = delete;
    Reservation& operator=(const Reservation&) = delete;
    Reservation& operator=(Reservation&&) = delete;
    ~Reservation();

   private:
    MemoryLedger* ledger_;
    std::size_t bytes_;
  };

  // Throws BudgetError if `bytes` exceeds the whole capacity.
  Reservation reserve(std::size_t bytes);

  void charge(std::size_t bytes);
  void release(std::size_t bytes);

  std::size_t capacity() const { return capacity_; }
  std::size_t peak() const;
  std::size_t current() const;

 private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t reserved_ = 0;
  std::size_t live_ = 0;
  std::size_t peak_ = 0;
};

// Worst-case live tensor bytes for fusing one image: the running sum, one
// decoded map, and the label plane.
std::size_t fusion_footprint(std::size_t height, std::size_t width,
                             std::size_t classes);

struct FusionFailure {
  std::string image_id;
  std::string message;
};

struct FusionReport {
  std::size_t images_processed = 0;
  std::size_t peak_buffer_bytes = 0;
  std::size_t memory_budget = 0;
  std::size_t workers = 1;
  std::vector<FusionFailure> failures;
  std::vector<std::filesystem::path> outputs;
};

struct StreamingOptions {
  std::size_t workers = 1;
};

// Fuses every manifest entry into a pseudo-label image <out_dir>/<id>.png.
//
// Per image, model maps are decoded one at a time into a scratch buffer and
// added to a running sum in manifest order; the sum is divided by M once and
// gated. Labels are bitwise identical to pseudo_labels(mbt_mean(maps)).
// Unreadable or inconsistent inputs become per-image failures. A budget that
// cannot hold one image's footprint throws BudgetError.
FusionReport streaming_fuse(const FusionManifest& manifest,
                            const GatePolicy& gate,
                            const std::filesystem::path& out_dir,
                            const StreamingOptions& options = {});

void write_fusion_report(const FusionReport& report,
                         const std::filesystem::path& path);

}  // namespace fdakit

#endif  // FDAKIT_STREAMING_HPP_
