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

#include "fdakit/streaming.hpp"

#include <fstream>
#include <sstream>

#include "fdakit/image_io.hpp"
#include "fdakit/parallel.hpp"
#include "fdakit/probmap_io.hpp"

namespace fdakit {

void FusionManifest::validate() const {
  if (model_count == 0) throw ParameterError("manifest needs at least one model");
  for (const auto& e : entries) {
    if (e.image_id.empty() || e.image_id.find('/') != std::string::npos ||
        e.image_id == "." || e.image_id == "..") {
      throw ParameterError("unusable image id '" + e.image_id + "'");
    }
    if (e.model_paths.size() != model_count) {
      throw ParameterError("image '" + e.image_id + "' lists " +
                           std::to_string(e.model_paths.size()) +
                           " model maps, expected " +
                           std::to_string(model_count));
    }
  }
}

FusionManifest read_fusion_manifest(const std::filesystem::path& path,
                                    std::size_t memory_budget) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open manifest");
  const auto base = path.parent_path();

  FusionManifest manifest;
  manifest.memory_budget = memory_budget;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() < 2) {
      throw FormatError(where + ": expected image_id followed by model paths");
    }
    ManifestEntry entry{fields.front(), {}};
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i].empty()) throw FormatError(where + ": empty path field");
      std::filesystem::path p(fields[i]);
      entry.model_paths.push_back(p.is_relative() ? base / p : p);
    }
    if (manifest.model_count == 0) {
      manifest.model_count = entry.model_paths.size();
    } else if (entry.model_paths.size() != manifest.model_count) {
      throw FormatError(where + ": " + std::to_string(entry.model_paths.size()) +
                        " model paths, earlier lines have " +
                        std::to_string(manifest.model_count));
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) {
    throw FormatError(path.string() + ": manifest lists no images");
  }
  manifest.validate();
  return manifest;
}

void write_fusion_manifest(const FusionManifest& manifest,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot write manifest");
  for (const auto& e : manifest.entries) {
    out << e.image_id;
    for (const auto& p : e.model_paths) out << '\t' << p.string();
    out << '\n';
  }
}

MemoryLedger::Reservation::~Reservation() {
  if (ledger_ == nullptr) return;
  {
    std::lock_guard lock(ledger_->mu_);
    ledger_->reserved_ -= bytes_;
  }
  ledger_->cv_.notify_all();
}

MemoryLedger::Reservation MemoryLedger::reserve(std::size_t bytes) {
  if (bytes > capacity_) {
    throw BudgetError("memory budget of " + std::to_string(capacity_) +
                      " bytes cannot hold one image's fusion buffers (" +
                      std::to_string(bytes) + " bytes needed)");
  }
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return reserved_ + bytes <= capacity_; });
  reserved_ += bytes;
  return Reservation(this, bytes);
}

void MemoryLedger::charge(std::size_t bytes) {
  std::lock_guard lock(mu_);
  live_ += bytes;
  peak_ = std::max(peak_, live_);
}

void MemoryLedger::release(std::size_t bytes) {
  std::lock_guard lock(mu_);
  live_ -= bytes;
}

std::size_t MemoryLedger::peak() const {
  std::lock_guard lock(mu_);
  return peak_;
}

std::size_t MemoryLedger::current() const {
  std::lock_guard lock(mu_);
  return live_;
}

std::size_t fusion_footprint(std::size_t height, std::size_t width,
                             std::size_t classes) {
  return 2 * height * width * classes * sizeof(double) + height * width;
}

namespace {

// Charges the ledger for a tensor's allocation for as long as it lives.
class Charge {
 public:
  Charge(MemoryLedger& ledger, std::size_t bytes)
      : ledger_(ledger), bytes_(bytes) {
    ledger_.charge(bytes_);
  }
  ~Charge() { ledger_.release(bytes_); }
  Charge(const Charge&) = delete;
  Charge& operator=(const Charge&) = delete;

 private:
  MemoryLedger& ledger_;
  std::size_t bytes_;
};

std::size_t heap_bytes(const ProbMap& m) { return m.byte_size(); }

void fuse_one(const ManifestEntry& entry, std::size_t model_count,
              const GatePolicy& gate, const std::filesystem::path& out_path,
              MemoryLedger& ledger) {
  const ProbMapHeader first = read_probmap_header(entry.model_paths.front());
  const auto reservation = ledger.reserve(
      fusion_footprint(first.height, first.width, first.classes));

  ProbMap sum(first.height, first.width, first.classes);
  const Charge sum_charge(ledger, heap_bytes(sum));
  load_probmap_into(entry.model_paths.front(), sum);
  if (sum.byte_size() != first.map_bytes()) {
    throw FormatError(entry.model_paths.front().string() +
                      ": header changed while reading");
  }

  if (model_count > 1) {
    ProbMap scratch(first.height, first.width, first.classes);
    const Charge scratch_charge(ledger, heap_bytes(scratch));
    for (std::size_t m = 1; m < model_count; ++m) {
      const ProbMapHeader h = read_probmap_header(entry.model_paths[m]);
      if (h.height != first.height || h.width != first.width ||
          h.classes != first.classes) {
        throw DimensionError(entry.model_paths[m].string() + ": shape " +
                             std::to_string(h.height) + "x" +
                             std::to_string(h.width) + "x" +
                             std::to_string(h.classes) +
                             " differs from model 1");
      }
      load_probmap_into(entry.model_paths[m], scratch);
      accumulate_scores(sum, scratch);
    }
  }
  finalize_mean(sum, model_count);

  // Scratch is gone by now; gating temporaries fit in the space it held.
  const LabelMap labels = pseudo_labels(sum, gate);
  const Charge label_charge(ledger, labels.size());
  save_labels(labels, out_path);
}

}  // namespace

FusionReport streaming_fuse(const FusionManifest& manifest,
                            const GatePolicy& gate,
                            const std::filesystem::path& out_dir,
                            const StreamingOptions& options) {
  manifest.validate();
  gate.validate();
  std::filesystem::create_directories(out_dir);

  MemoryLedger ledger(manifest.memory_budget);
  const std::size_t n = manifest.entries.size();
  std::vector<std::string> errors(n);
  std::vector<char> ok(n, 0);

  parallel_for(n, options.workers, [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    try {
      fuse_one(entry, manifest.model_count, gate,
               out_dir / (entry.image_id + ".png"), ledger);
      ok[i] = 1;
    } catch (const BudgetError&) {
      throw;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  FusionReport report;
  report.memory_budget = manifest.memory_budget;
  report.workers = std::max<std::size_t>(1, options.workers);
  report.peak_buffer_bytes = ledger.peak();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& id = manifest.entries[i].image_id;
    if (ok[i]) {
      ++report.images_processed;
      report.outputs.push_back(out_dir / (id + ".png"));
    } else {
      report.failures.push_back({id, errors[i]});
    }
  }
  return report;
}

void write_fusion_report(const FusionReport& report,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot write fusion report");
  out << "images_processed = " << report.images_processed << '\n'
      << "images_failed = " << report.failures.size() << '\n'
      << "peak_buffer_bytes = " << report.peak_buffer_bytes << '\n'
      << "memory_budget = " << report.memory_budget << '\n'
      << "workers = " << report.workers << '\n';
  for (const auto& f : report.failures) {
    out << "failed\t" << f.image_id << '\t' << f.message << '\n';
  }
}

}  // namespace fdakit
