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

#include "fdakit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fdakit/dataprep.hpp"
#include "fdakit/eval.hpp"
#include "fdakit/image_io.hpp"
#include "fdakit/parallel.hpp"
#include "fdakit/rng.hpp"
#include "fdakit/spectral.hpp"
#include "fdakit/streaming.hpp"

namespace fdakit::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string config;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool verbose = false;
  CLI::Option* seed_opt = nullptr;
};

struct TransferOptions {
  std::string source_dir;
  std::string target_dir;
  std::string out;
  double beta = 0.01;
  std::uint64_t pairing_seed = 0;
  CLI::Option* pairing_seed_opt = nullptr;
  bool no_prep = false;
  std::string resize = "1280x720";
  std::string crop = "1024x512";
};

struct SweepOptions {
  std::string source;
  std::string target;
  std::string out;
  std::vector<double> betas{std::begin(kDefaultBetas), std::end(kDefaultBetas)};
};

struct FuseOptions {
  std::string manifest;
  std::string out;
  double threshold = 0.9;
  double top_fraction = 1.0;
  std::string memory_budget = "2G";
  CLI::Option* threshold_opt = nullptr;
  CLI::Option* top_fraction_opt = nullptr;
};

struct EvalOptions {
  std::string pred_dir;
  std::string gt_dir;
  std::size_t classes = 19;
  std::string remap;
  std::string report;
  std::string from_per_class;
  std::string experiment = "measured";
  double reference = 0.0;
  CLI::Option* reference_opt = nullptr;
};

struct TableOptions {
  std::string rows;
  std::string out;
  double tolerance = 0.05;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_beta(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

Extent parse_extent(const std::string& text, const char* flag) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("no 'x'");
    std::size_t used = 0;
    const auto w = std::stoul(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("width");
    const std::string rest = text.substr(x + 1);
    const auto h = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("height");
    return Extent{w, h};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects WIDTHxHEIGHT, got '" + text +
                     "'");
  }
}

std::size_t parse_bytes(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("--memory-budget: cannot parse '" + text + "'");
  }
  std::string suffix = text.substr(used);
  double scale = 1.0;
  if (suffix == "K" || suffix == "k") scale = 1024.0;
  else if (suffix == "M" || suffix == "m") scale = 1024.0 * 1024.0;
  else if (suffix == "G" || suffix == "g") scale = 1024.0 * 1024.0 * 1024.0;
  else if (!suffix.empty()) {
    throw UsageError("--memory-budget: unknown suffix '" + suffix + "'");
  }
  if (!(value > 0.0)) throw UsageError("--memory-budget must be positive");
  return static_cast<std::size_t>(value * scale);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// `key = value` lines; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> read_config(
    const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path.string() + ": cannot open config file");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": expected key = value");
    }
    entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return entries;
}

CLI::Option* find_option(CLI::App& app, CLI::App& sub, const std::string& key) {
  if (auto* o = sub.get_option_no_throw("--" + key)) return o;
  return app.get_option_no_throw("--" + key);
}

// Config values fill in options that were not given on the command line.
void apply_config(CLI::App& app, CLI::App& sub, const fs::path& path) {
  for (const auto& [key, value] : read_config(path)) {
    CLI::Option* opt = find_option(app, sub, key);
    if (opt == nullptr || key == "config" || key == "help") {
      throw UsageError(path.string() + ": unknown key '" + key + "' for " +
                       sub.get_name());
    }
    if (opt->count() > 0) continue;
    if (opt->get_expected_max() > 1) {
      std::stringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) opt->add_result(trim(item));
    } else {
      opt->add_result(value);
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError(path.string() + ": bad value for '" + key +
                       "': " + e.what());
    }
  }
}

// Checked after the config file is applied, so it can supply these too.
void require_options(CLI::App& app, CLI::App& sub) {
  static const std::map<std::string, std::vector<std::string>> kRequired = {
      {"transfer", {"source-dir", "target-dir", "out"}},
      {"sweep", {"source", "target", "out"}},
      {"fuse", {"manifest", "out"}},
      {"table", {"rows"}},
  };
  const auto it = kRequired.find(sub.get_name());
  if (it == kRequired.end()) return;
  for (const auto& key : it->second) {
    if (find_option(app, sub, key)->count() == 0) {
      throw UsageError("--" + key + " is required");
    }
  }
}

std::string option_value(const CLI::Option* opt) {
  if (opt->count() > 0) {
    std::string joined;
    for (const auto& r : opt->results()) {
      if (!joined.empty()) joined += ",";
      joined += r;
    }
    return joined;
  }
  return opt->get_default_str();
}

// Echoes every effective setting as `key = value`, loadable with --config.
// Worker count and verbosity are left out; they never change the results.
void write_run_config(const fs::path& path, const std::string& command,
                      CLI::App& app, CLI::App& sub,
                      const std::map<std::string, std::string>& effective) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot write run manifest");
  out << "# fdakit " << command << '\n';
  std::map<std::string, std::string> values;
  for (CLI::App* a : {&app, &sub}) {
    for (const CLI::Option* opt : a->get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string& name = opt->get_lnames().front();
      if (name == "help" || name == "config" || name == "workers" ||
          name == "verbose") {
        continue;
      }
      const std::string v = option_value(opt);
      if (!v.empty()) values[name] = v;
    }
  }
  for (const auto& [k, v] : effective) values[k] = v;
  for (const auto& [k, v] : values) out << k << " = " << v << '\n';
}

std::vector<fs::path> list_pngs(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw UsageError(dir.string() + ": not a readable directory");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta < 0.5)) {
    throw UsageError("--beta must lie in [0, 0.5), got " + format_beta(beta));
  }
}

// ---------------------------------------------------------------- transfer

struct TransferRecord {
  std::string source_id;
  std::string target_id;
  Offset source_offset;
  Offset target_offset;
  bool ok = false;
  std::string error;
};

int cmd_transfer(const GlobalOptions& g, const TransferOptions& o,
                 CLI::App& app, CLI::App& sub, std::ostream& out,
                 std::ostream& err) {
  check_beta(o.beta);
  if (g.seed_opt->count() == 0) {
    throw UsageError("transfer needs --seed; every random draw derives from it");
  }
  const std::uint64_t pairing_seed =
      o.pairing_seed_opt->count() > 0 ? o.pairing_seed : g.seed;
  PrepConfig prep;
  prep.resize_to = parse_extent(o.resize, "--resize");
  prep.crop_to = parse_extent(o.crop, "--crop");
  prep.seed = g.seed;
  prep.pairing_seed = pairing_seed;
  if (!o.no_prep) {
    try {
      prep.validate();
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
  }

  const auto sources = list_pngs(o.source_dir);
  const auto targets = list_pngs(o.target_dir);
  if (sources.empty()) throw UsageError(o.source_dir + ": no .png images");
  if (targets.empty()) throw UsageError(o.target_dir + ": no .png images");
  std::vector<std::string> source_ids, target_ids;
  std::map<std::string, fs::path> target_paths;
  for (const auto& p : sources) source_ids.push_back(stem_of(p));
  for (const auto& p : targets) {
    target_ids.push_back(stem_of(p));
    target_paths[stem_of(p)] = p;
  }
  const auto pairs = pair_source_target(source_ids, target_ids, pairing_seed);

  const fs::path out_dir(o.out);
  fs::create_directories(out_dir);

  std::vector<TransferRecord> records(sources.size());
  parallel_for(sources.size(), g.workers, [&](std::size_t i) {
    TransferRecord& rec = records[i];
    rec.source_id = pairs[i].first;
    rec.target_id = pairs[i].second;
    try {
      ImageTensor src = load_image(sources[i]);
      ImageTensor tgt = load_image(target_paths.at(rec.target_id));
      if (!o.no_prep) {
        RngStream rng(g.seed, "prep:" + rec.source_id);
        auto s = prepare_image(src, prep, rng);
        auto t = prepare_image(tgt, prep, rng);
        src = std::move(s.image);
        tgt = std::move(t.image);
        rec.source_offset = s.offset;
        rec.target_offset = t.offset;
      }
      const ImageTensor adapted = spectral_transfer(src, tgt, o.beta);
      save_image(adapted, out_dir / (rec.source_id + ".png"));
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });

  std::ofstream manifest(out_dir / "manifest.tsv");
  manifest << "# source_id\ttarget_id\tsource_x\tsource_y\ttarget_x\ttarget_y"
              "\tbeta\tseed\tpairing_seed\tprep\trng\n";
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (!r.ok) {
      ++failed;
      err << "fdakit transfer: " << r.source_id << ": " << r.error << '\n';
      continue;
    }
    if (g.verbose) {
      err << "fdakit transfer: " << r.source_id << " <- " << r.target_id << '\n';
    }
    manifest << r.source_id << '\t' << r.target_id << '\t' << r.source_offset.x
             << '\t' << r.source_offset.y << '\t' << r.target_offset.x << '\t'
             << r.target_offset.y << '\t' << format_beta(o.beta) << '\t'
             << g.seed << '\t' << pairing_seed << '\t'
             << (o.no_prep ? "none" : o.resize + "->" + o.crop) << '\t'
             << kRngId << '\n';
  }
  write_run_config(out_dir / "run_config.txt", "transfer", app, sub,
                   {{"pairing-seed", std::to_string(pairing_seed)},
                    {"seed", std::to_string(g.seed)}});
  out << "transferred " << records.size() - failed << " of " << records.size()
      << " images (beta " << format_beta(o.beta) << ")\n";
  return failed == 0 ? kSuccess : kPartialFailure;
}

// ------------------------------------------------------------------- sweep

int cmd_sweep(const SweepOptions& o, CLI::App& app, CLI::App& sub,
              std::ostream& out) {
  if (o.betas.empty()) throw UsageError("--betas needs at least one value");
  std::vector<double> betas = o.betas;
  for (double b : betas) check_beta(b);
  std::sort(betas.begin(), betas.end());

  const ImageTensor src = load_image(o.source);
  ImageTensor tgt = load_image(o.target);
  if (!tgt.same_shape(src)) tgt = resize_bilinear(tgt, src.width(), src.height());

  const fs::path out_dir(o.out);
  fs::create_directories(out_dir);
  const auto entries = beta_sweep(src, tgt, betas);

  std::ofstream listing(out_dir / "distances.txt");
  listing << "# beta\tmask_cells\tl2_distance\n";
  for (const auto& e : entries) {
    const fs::path file = out_dir / ("adapted_beta_" + format_beta(e.beta) + ".png");
    save_image(e.image, file);
    // Distance of what was actually written, i.e. after 8-bit encoding.
    const double dist = l2_distance(load_image(file), src);
    listing << format_beta(e.beta) << '\t' << e.mask_cells << '\t'
            << format_double(dist) << '\n';
    out << "beta " << format_beta(e.beta) << ": " << e.mask_cells
        << " cells, L2 distance " << dist << '\n';
  }
  write_run_config(out_dir / "run_config.txt", "sweep", app, sub, {});
  return kSuccess;
}

// -------------------------------------------------------------------- fuse

int cmd_fuse(const GlobalOptions& g, const FuseOptions& o, CLI::App& app,
             CLI::App& sub, std::ostream& out, std::ostream& err) {
  const bool by_threshold = o.threshold_opt->count() > 0;
  const bool by_fraction = o.top_fraction_opt->count() > 0;
  if (by_threshold && by_fraction) {
    throw UsageError("--threshold and --top-fraction are mutually exclusive");
  }
  const GatePolicy gate = by_fraction ? GatePolicy::per_class(o.top_fraction)
                                      : GatePolicy::global(o.threshold);
  try {
    gate.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  const std::size_t budget = parse_bytes(o.memory_budget);
  FusionManifest manifest;
  try {
    manifest = read_fusion_manifest(o.manifest, budget);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const fs::path out_dir(o.out);
  FusionReport report;
  try {
    report = streaming_fuse(manifest, gate, out_dir, {g.workers});
  } catch (const BudgetError& e) {
    err << "fdakit fuse: aborted: " << e.what()
        << "; raise --memory-budget to at least one image's footprint\n";
    return kUsageError;
  }
  write_fusion_report(report, out_dir / "fusion_report.txt");
  write_run_config(out_dir / "run_config.txt", "fuse", app, sub,
                   {{"memory-budget", std::to_string(budget)}});
  if (g.verbose) {
    for (const auto& p : report.outputs) err << "fdakit fuse: wrote " << p.string() << '\n';
  }
  for (const auto& f : report.failures) {
    err << "fdakit fuse: " << f.image_id << ": " << f.message << '\n';
  }
  out << "fused " << report.images_processed << " of "
      << manifest.entries.size() << " images, peak buffer "
      << report.peak_buffer_bytes << " bytes\n";
  return report.failures.empty() ? kSuccess : kPartialFailure;
}

// -------------------------------------------------------------------- eval

void write_reports(const std::string& prefix, const std::string& text,
                   const std::string& csv) {
  if (prefix.empty()) return;
  const fs::path base(prefix);
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  std::ofstream(prefix + ".txt") << text;
  std::ofstream(prefix + ".csv") << csv;
}

ClassIouReport report_from_per_class(const fs::path& path, std::size_t classes) {
  std::ifstream in(path);
  if (!in) throw UsageError(path.string() + ": cannot open per-class file");
  ClassIouReport report;
  std::string line;
  bool named = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::string name, value = t;
    if (const auto sp = t.find_last_of(" \t"); sp != std::string::npos) {
      name = trim(t.substr(0, sp));
      value = t.substr(sp + 1);
      named = true;
    }
    report.class_names.push_back(name);
    if (value == "-" || value == "nan" || value == "\xE2\x80\x94") {
      report.per_class.push_back(std::nullopt);
      continue;
    }
    try {
      // Inputs are percentages, as printed in IoU tables.
      report.per_class.push_back(std::stod(value) / 100.0);
    } catch (const std::exception&) {
      throw UsageError(path.string() + ": cannot parse IoU '" + value + "'");
    }
  }
  if (report.per_class.empty()) throw UsageError(path.string() + ": no values");
  if (!named) {
    report.class_names = report.per_class.size() == classes
                             ? default_class_names(classes)
                             : default_class_names(report.per_class.size());
  }
  report.miou = mean_iou(report.per_class);
  return report;
}

int cmd_eval(const GlobalOptions& g, const EvalOptions& o, CLI::App& app,
             CLI::App& sub, std::ostream& out, std::ostream& err) {
  if (o.classes == 0 || o.classes >= kIgnoreLabel) {
    throw UsageError("--classes must lie in [1, 254]");
  }
  ClassIouReport report;
  int status = kSuccess;
  if (!o.from_per_class.empty()) {
    report = report_from_per_class(o.from_per_class, o.classes);
  } else {
    if (o.pred_dir.empty() || o.gt_dir.empty()) {
      throw UsageError("eval needs --pred-dir and --gt-dir, or --from-per-class");
    }
    const std::optional<LabelRemap> remap =
        o.remap.empty() ? std::nullopt
                        : std::optional<LabelRemap>(load_label_remap(o.remap));
    std::map<std::string, fs::path> preds, gts;
    for (const auto& p : list_pngs(o.pred_dir)) preds[stem_of(p)] = p;
    for (const auto& p : list_pngs(o.gt_dir)) gts[stem_of(p)] = p;
    std::vector<std::string> ids;
    for (const auto& [id, p] : preds) {
      if (gts.count(id)) {
        ids.push_back(id);
      } else {
        err << "fdakit eval: warning: no ground truth for '" << id
            << "', skipped\n";
        status = kPartialFailure;
      }
    }
    for (const auto& [id, p] : gts) {
      if (!preds.count(id)) {
        err << "fdakit eval: warning: no prediction for '" << id
            << "', skipped\n";
        status = kPartialFailure;
      }
    }
    if (ids.empty()) {
      err << "fdakit eval: no prediction/ground-truth pairs share an id\n";
      return kPartialFailure;
    }
    std::vector<ConfusionMatrix> partial(ids.size(), ConfusionMatrix(o.classes));
    std::vector<std::string> errors(ids.size());
    parallel_for(ids.size(), g.workers, [&](std::size_t i) {
      try {
        LabelMap gt = load_labels(gts.at(ids[i]));
        if (remap) gt = remap_labels(gt, *remap);
        confusion_accumulate(load_labels(preds.at(ids[i])), gt, partial[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    ConfusionMatrix total(o.classes);
    std::size_t used = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!errors[i].empty()) {
        err << "fdakit eval: " << ids[i] << ": " << errors[i] << '\n';
        status = kPartialFailure;
        continue;
      }
      if (g.verbose) err << "fdakit eval: " << ids[i] << '\n';
      total += partial[i];
      ++used;
    }
    if (used == 0) return kPartialFailure;
    report = class_iou(total);
  }

  const std::string text = render_class_report(report, ReportFormat::kText);
  write_reports(o.report, text, render_class_report(report, ReportFormat::kCsv));
  out << text;
  if (o.reference_opt->count() > 0) {
    ErrorRow row{o.experiment, o.reference, std::nullopt, std::nullopt};
    if (report.miou) row.measured = 100.0 * *report.miou;
    const ErrorRow rows[] = {row};
    const std::string table = emit_report(rows, ReportFormat::kText);
    write_reports(o.report.empty() ? "" : o.report + "_errors", table,
                  emit_report(rows, ReportFormat::kCsv));
    out << table;
  }
  if (!o.report.empty()) {
    write_run_config(fs::path(o.report + "_run_config.txt"), "eval", app, sub, {});
  }
  return status;
}

// ------------------------------------------------------------------- table

std::vector<ErrorRow> read_error_rows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path.string() + ": cannot open rows file");
  std::vector<ErrorRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, '\t')) f.push_back(trim(item));
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (f.size() < 3 || f.size() > 4) {
      throw UsageError(where + ": expected experiment, reference, measured"
                               "[, published error] separated by tabs");
    }
    try {
      ErrorRow row{f[0], std::stod(f[1]), std::nullopt, std::nullopt};
      if (f[2] != "-" && !f[2].empty()) row.measured = std::stod(f[2]);
      if (f.size() == 4 && !f[3].empty()) {
        std::string pub = f[3];
        if (!pub.empty() && pub.back() == '%') pub.pop_back();
        row.published_error = std::stod(pub);
      }
      rows.push_back(row);
    } catch (const std::invalid_argument&) {
      throw UsageError(where + ": cannot parse number");
    }
  }
  if (rows.empty()) throw UsageError(path.string() + ": no rows");
  return rows;
}

int cmd_table(const TableOptions& o, std::ostream& out) {
  const auto rows = read_error_rows(o.rows);
  std::string text;
  try {
    text = emit_report(rows, ReportFormat::kText, o.tolerance);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  write_reports(o.out, text, emit_report(rows, ReportFormat::kCsv, o.tolerance));
  out << text;
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Fourier domain adaptation toolkit", "fdakit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "key = value file; flags take precedence");
  g.seed_opt = app.add_option("--seed", g.seed, "Seed for every random draw");
  app.add_option("--workers", g.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--verbose", g.verbose, "Log per-item progress");

  TransferOptions t;
  auto* transfer = app.add_subcommand("transfer", "Adapt source images toward paired targets");
  transfer->add_option("--source-dir", t.source_dir);
  transfer->add_option("--target-dir", t.target_dir);
  transfer->add_option("--out", t.out);
  transfer->add_option("--beta", t.beta, "Low-frequency window size")->capture_default_str();
  t.pairing_seed_opt = transfer->add_option("--pairing-seed", t.pairing_seed,
                                            "Seed for source/target pairing (defaults to --seed)");
  transfer->add_flag("--no-prep", t.no_prep, "Skip resize and random crop");
  transfer->add_option("--resize", t.resize, "Resize to WIDTHxHEIGHT")->capture_default_str();
  transfer->add_option("--crop", t.crop, "Random crop WIDTHxHEIGHT")->capture_default_str();

  SweepOptions s;
  auto* sweep = app.add_subcommand("sweep", "Transfer one pair over several window sizes");
  sweep->add_option("--source", s.source);
  sweep->add_option("--target", s.target);
  sweep->add_option("--out", s.out);
  sweep->add_option("--betas", s.betas, "Window sizes")->delimiter(',')->capture_default_str();

  FuseOptions f;
  auto* fuse = app.add_subcommand("fuse", "Average cached model predictions into pseudo-labels");
  fuse->add_option("--manifest", f.manifest);
  fuse->add_option("--out", f.out);
  f.threshold_opt = fuse->add_option("--threshold", f.threshold, "Global confidence gate (default 0.9)");
  f.top_fraction_opt = fuse->add_option("--top-fraction", f.top_fraction, "Per-class kept fraction");
  fuse->add_option("--memory-budget", f.memory_budget, "Bytes, K/M/G suffix allowed")
      ->capture_default_str();

  EvalOptions e;
  auto* eval = app.add_subcommand("eval", "Per-class IoU and mIoU of label predictions");
  eval->add_option("--pred-dir", e.pred_dir);
  eval->add_option("--gt-dir", e.gt_dir);
  eval->add_option("--classes", e.classes)->capture_default_str();
  eval->add_option("--remap", e.remap, "Ground-truth id remap table");
  eval->add_option("--report", e.report, "Output prefix for .txt/.csv reports");
  eval->add_option("--from-per-class", e.from_per_class,
                   "Aggregate given per-class IoU percentages instead");
  e.reference_opt = eval->add_option("--reference", e.reference, "Reference mIoU for an error row");
  eval->add_option("--experiment", e.experiment)->capture_default_str();

  TableOptions tb;
  auto* table = app.add_subcommand("table", "Render a reference vs measured mIoU error table");
  table->add_option("--rows", tb.rows, "TSV: experiment, reference, measured[, published]");
  table->add_option("--out", tb.out, "Output prefix for .txt/.csv");
  table->add_option("--tolerance", tb.tolerance)->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& ex) {
    err << "fdakit: " << ex.what() << '\n';
    return kUsageError;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!g.config.empty()) apply_config(app, *sub, g.config);
    require_options(app, *sub);
    if (g.workers == 0) throw UsageError("--workers must be at least 1");
    if (sub == transfer) return cmd_transfer(g, t, app, *sub, out, err);
    if (sub == sweep) return cmd_sweep(s, app, *sub, out);
    if (sub == fuse) return cmd_fuse(g, f, app, *sub, out, err);
    if (sub == eval) return cmd_eval(g, e, app, *sub, out, err);
    return cmd_table(tb, out);
  } catch (const UsageError& ex) {
    err << "fdakit " << sub->get_name() << ": " << ex.what() << '\n';
    return kUsageError;
  } catch (const std::exception& ex) {
    err << "fdakit " << sub->get_name() << ": " << ex.what() << '\n';
    return kPartialFailure;
  }
}

}  // namespace fdakit::cli
