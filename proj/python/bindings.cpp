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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "fdakit/cli.hpp"
#include "fdakit/error.hpp"
#include "fdakit/eval.hpp"
#include "fdakit/fft.hpp"
#include "fdakit/fusion.hpp"
#include "fdakit/probmap_io.hpp"
#include "fdakit/spectral.hpp"
#include "fdakit/streaming.hpp"

namespace py = pybind11;

namespace fdakit {
namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using C128Array =
    py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

void expect_ndim(const py::array& a, py::ssize_t ndim, const char* what) {
  if (a.ndim() != ndim) {
    throw DimensionError(std::string(what) + " must have " + std::to_string(ndim) +
                         " dimensions, got " + std::to_string(a.ndim()));
  }
}

template <typename T, typename A>
Grid<T> to_grid(const A& a, const char* what) {
  expect_ndim(a, 2, what);
  Grid<T> g(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), g.values().begin());
  return g;
}

template <typename T>
py::array_t<T> from_grid(const Grid<T>& g) {
  py::array_t<T> out({g.height(), g.width()});
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

// H x W x C (or H x W) arrays to channel planes.
ImageTensor to_image(const F64Array& a) {
  if (a.ndim() == 2) return ImageTensor({to_grid<double>(a, "image")});
  expect_ndim(a, 3, "image");
  const std::size_t h = a.shape(0), w = a.shape(1), c = a.shape(2);
  ImageTensor img(h, w, c, 0.0);
  const double* src = a.data();
  for (std::size_t p = 0; p < h * w; ++p) {
    for (std::size_t k = 0; k < c; ++k) img.plane(k).values()[p] = src[p * c + k];
  }
  return img;
}

F64Array from_image(const ImageTensor& img) {
  const std::size_t h = img.height(), w = img.width(), c = img.channels();
  F64Array out({h, w, c});
  double* dst = out.mutable_data();
  for (std::size_t p = 0; p < h * w; ++p) {
    for (std::size_t k = 0; k < c; ++k) dst[p * c + k] = img.plane(k).values()[p];
  }
  return out;
}

// K x H x W arrays, class-major like the in-memory layout.
ProbMap to_probmap(const F64Array& a, bool normalized) {
  expect_ndim(a, 3, "probability map");
  ProbMap map(a.shape(1), a.shape(2), a.shape(0), normalized);
  std::copy(a.data(), a.data() + a.size(), map.values().begin());
  return map;
}

F64Array from_probmap(const ProbMap& map) {
  F64Array out({map.classes(), map.height(), map.width()});
  std::copy(map.values().begin(), map.values().end(), out.mutable_data());
  return out;
}

GatePolicy make_gate(std::optional<double> threshold, std::optional<double> top_fraction) {
  if (threshold && top_fraction) {
    throw ParameterError("threshold and top_fraction are mutually exclusive");
  }
  return top_fraction ? GatePolicy::per_class(*top_fraction)
                      : GatePolicy::global(threshold.value_or(0.9));
}

py::object optional_to_py(const std::optional<double>& v) {
  return v ? py::cast(*v) : py::none();
}

}  // namespace
}  // namespace fdakit

PYBIND11_MODULE(_core, m) {
  using namespace fdakit;
  m.doc() = "Native core of fdakit";

  auto base = py::register_exception<Error>(m, "FdakitError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<ParameterError>(m, "ParameterError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<PreconditionError>(m, "PreconditionError", base);
  py::register_exception<FormatError>(m, "FormatError", base);
  py::register_exception<IoError>(m, "IoError", base);
  py::register_exception<DataError>(m, "DataError", base);
  py::register_exception<BudgetError>(m, "BudgetError", base);

  m.def("fft2", [](const F64Array& x) { return from_grid(dft2d_forward(to_grid<double>(x, "plane"))); },
        py::arg("plane"), "Unnormalized forward 2D DFT of a real plane.");
  m.def(
      "ifft2",
      [](const C128Array& spec) {
        InverseResult r = dft2d_inverse(to_grid<std::complex<double>>(spec, "spectrum"));
        return py::make_tuple(from_grid(r.plane), r.imag_residual);
      },
      py::arg("spectrum"), "Inverse 2D DFT scaled by 1/(HW); returns (real part, max |imag|).");

  py::class_<BetaMask>(m, "BetaMask")
      .def_readonly("beta", &BetaMask::beta)
      .def_readonly("height", &BetaMask::height)
      .def_readonly("width", &BetaMask::width)
      .def_readonly("half_height", &BetaMask::half_height)
      .def_readonly("half_width", &BetaMask::half_width)
      .def_readonly("active", &BetaMask::active)
      .def_property_readonly("cell_count", &BetaMask::cell_count)
      .def("contains", &BetaMask::contains, py::arg("h"), py::arg("w"))
      .def("__repr__", [](const BetaMask& b) {
        std::ostringstream s;
        s << "BetaMask(beta=" << b.beta << ", shape=(" << b.height << ", " << b.width
          << "), cells=" << b.cell_count() << ")";
        return s.str();
      });
  m.def("build_mask", &build_mask, py::arg("beta"), py::arg("height"), py::arg("width"));
  m.attr("DEFAULT_BETAS") = std::vector<double>(std::begin(kDefaultBetas), std::end(kDefaultBetas));

  m.def(
      "spectral_transfer",
      [](const F64Array& src, const F64Array& tgt, double beta) {
        const TransferResult r = spectral_transfer_detailed(to_image(src), to_image(tgt), beta);
        return py::make_tuple(from_image(r.image), r.imag_residual);
      },
      py::arg("source"), py::arg("target"), py::arg("beta") = 0.01,
      "Swap the low-frequency amplitude of `source` (H x W x C) for that of "
      "`target`. Returns (image, imag_residual).");
  m.def(
      "beta_sweep",
      [](const F64Array& src, const F64Array& tgt, std::vector<double> betas) {
        py::list out;
        for (const auto& e : beta_sweep(to_image(src), to_image(tgt), betas)) {
          py::dict d;
          d["beta"] = e.beta;
          d["image"] = from_image(e.image);
          d["l2_distance"] = e.l2_distance_from_src;
          d["mask_cells"] = e.mask_cells;
          out.append(d);
        }
        return out;
      },
      py::arg("source"), py::arg("target"),
      py::arg("betas") = std::vector<double>(std::begin(kDefaultBetas), std::end(kDefaultBetas)));

  m.def(
      "mbt_mean",
      [](const std::vector<F64Array>& maps, bool normalized) {
        std::vector<ProbMap> in;
        for (const auto& a : maps) in.push_back(to_probmap(a, normalized));
        return from_probmap(mbt_mean(in));
      },
      py::arg("maps"), py::arg("normalized") = true,
      "Mean of K x H x W maps, summed in list order with one final division.");
  m.def(
      "argmax_labels",
      [](const F64Array& map) { return from_grid(argmax_labels(to_probmap(map, false))); },
      py::arg("map"));
  m.def(
      "pseudo_labels",
      [](const F64Array& map, std::optional<double> threshold,
         std::optional<double> top_fraction) {
        const ProbMap pm = to_probmap(map, true);
        pm.validate();
        return from_grid(pseudo_labels(pm, make_gate(threshold, top_fraction)));
      },
      py::arg("map"), py::kw_only(), py::arg("threshold") = py::none(),
      py::arg("top_fraction") = py::none(),
      "Gated argmax labels; rejected pixels are 255. Default gate: threshold 0.9.");

  m.def(
      "store_probmap",
      [](const F64Array& map, const std::filesystem::path& path, bool normalized, bool compress) {
        return store_probmap(to_probmap(map, normalized), path,
                             compress ? Codec::kShuffleDeflate : Codec::kStored);
      },
      py::arg("map"), py::arg("path"), py::arg("normalized") = true, py::arg("compress") = true);
  m.def(
      "load_probmap",
      [](const std::filesystem::path& path) {
        const ProbMap map = load_probmap(path);
        return py::make_tuple(from_probmap(map), map.normalized());
      },
      py::arg("path"), "Returns (K x H x W array, normalized flag).");

  m.def(
      "fuse",
      [](const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
         std::optional<double> threshold, std::optional<double> top_fraction,
         std::size_t memory_budget, std::size_t workers) {
        const FusionManifest fm = read_fusion_manifest(manifest, memory_budget);
        FusionReport r;
        {
          py::gil_scoped_release release;
          r = streaming_fuse(fm, make_gate(threshold, top_fraction), out_dir, {workers});
        }
        py::dict d;
        d["images_processed"] = r.images_processed;
        d["peak_buffer_bytes"] = r.peak_buffer_bytes;
        py::list failures;
        for (const auto& f : r.failures) failures.append(py::make_tuple(f.image_id, f.message));
        d["failures"] = failures;
        d["outputs"] = r.outputs;
        return d;
      },
      py::arg("manifest"), py::arg("out_dir"), py::kw_only(), py::arg("threshold") = py::none(),
      py::arg("top_fraction") = py::none(), py::arg("memory_budget") = std::size_t{1} << 31,
      py::arg("workers") = 1);

  m.def(
      "confusion_matrix",
      [](const U8Array& pred, const U8Array& gt, std::size_t classes) {
        ConfusionMatrix cm(classes);
        confusion_accumulate(to_grid<std::uint8_t>(pred, "pred"),
                             to_grid<std::uint8_t>(gt, "gt"), cm);
        py::array_t<std::uint64_t> counts({classes, classes});
        for (std::size_t g = 0; g < classes; ++g) {
          for (std::size_t p = 0; p < classes; ++p) counts.mutable_at(g, p) = cm.count(g, p);
        }
        return py::make_tuple(counts, cm.ignored_pixels());
      },
      py::arg("pred"), py::arg("gt"), py::arg("classes"),
      "Returns (counts[gt, pred], ignored pixel count).");
  m.def(
      "class_iou",
      [](const U8Array& pred, const U8Array& gt, std::size_t classes) {
        ConfusionMatrix cm(classes);
        confusion_accumulate(to_grid<std::uint8_t>(pred, "pred"),
                             to_grid<std::uint8_t>(gt, "gt"), cm);
        const ClassIouReport r = class_iou(cm);
        py::list per_class;
        for (const auto& v : r.per_class) per_class.append(optional_to_py(v));
        return py::make_tuple(per_class, optional_to_py(r.miou));
      },
      py::arg("pred"), py::arg("gt"), py::arg("classes"),
      "Returns (per-class IoU with None for absent classes, mIoU or None).");
  m.def(
      "mean_iou",
      [](const std::vector<std::optional<double>>& values) {
        return optional_to_py(mean_iou(values));
      },
      py::arg("values"));
  m.def("relative_error", &relative_error, py::arg("reference"), py::arg("measured"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "fdakit");
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process; returns (code, stdout, stderr).");
}
