// Copyright 2026 The oidd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "oidd/error.hpp"
#include "oidd/evalharness.hpp"
#include "oidd/felzseg.hpp"
#include "oidd/segscore.hpp"
#include "oidd/ssim.hpp"
#include "oidd/tensorio.hpp"

namespace py = pybind11;
using namespace oidd;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

void require_ndim(const py::buffer_info& info, py::ssize_t ndim, const char* what) {
  if (info.ndim != ndim) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + " must have " + std::to_string(ndim) + " dimensions");
  }
}

std::vector<double> to_vector(const F64Array& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

RgbImage to_image(const F64Array& a) {
  const auto info = a.request();
  require_ndim(info, 3, "image");
  if (info.shape[2] != 3) throw Error(ErrorCode::kShapeMismatch, "image must be h x w x 3");
  return RgbImage(static_cast<int>(info.shape[0]), static_cast<int>(info.shape[1]), to_vector(a));
}

GrayMap to_gray(const F64Array& a) {
  const auto info = a.request();
  require_ndim(info, 2, "map");
  return GrayMap{static_cast<int>(info.shape[0]), static_cast<int>(info.shape[1]), to_vector(a)};
}

py::array_t<std::uint8_t> from_binary(const BinaryMap& m) {
  py::array_t<std::uint8_t> out({m.height(), m.width()});
  std::memcpy(out.mutable_data(), m.data().data(), m.data().size());
  return out;
}

std::vector<eval::ScoredSample> samples(const std::vector<double>& pos,
                                        const std::vector<double>& neg) {
  std::vector<eval::ScoredSample> out;
  for (double s : pos) out.push_back({s, eval::Truth::kInDistribution, ""});
  for (double s : neg) out.push_back({s, eval::Truth::kOod, ""});
  return out;
}

py::array read_oidt(const std::string& path) {
  const auto t = tensorio::read_tensor(path);
  std::vector<py::ssize_t> shape(t.dims.begin(), t.dims.end());
  if (t.dtype == tensorio::DType::kFloat32) {
    py::array_t<float> out(shape);
    const auto values = t.floats();
    std::memcpy(out.mutable_data(), values.data(), values.size() * sizeof(float));
    return out;
  }
  py::array_t<std::uint8_t> out(shape);
  std::memcpy(out.mutable_data(), t.payload.data(), t.payload.size());
  return out;
}

void write_oidt(const std::string& path, const py::array& a) {
  std::vector<std::uint32_t> dims;
  for (py::ssize_t d = 0; d < a.ndim(); ++d) dims.push_back(static_cast<std::uint32_t>(a.shape(d)));
  if (a.dtype().is(py::dtype::of<std::uint8_t>())) {
    const auto c = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(a);
    tensorio::write_tensor(path, tensorio::TensorFile::from_bytes(
                                     dims, std::vector<std::uint8_t>(c.data(), c.data() + c.size())));
    return;
  }
  const auto c = py::array_t<float, py::array::c_style | py::array::forcecast>::ensure(a);
  tensorio::write_tensor(path, tensorio::TensorFile::from_floats(
                                   dims, std::vector<float>(c.data(), c.data() + c.size())));
}

}  // namespace

PYBIND11_MODULE(_oidd, m) {
  m.doc() = "Segmentation-based out-of-intended-distribution detection";

  static py::exception<Error> error_type(m, "OiddError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::handle(error_type.ptr())(py::str(e.what()));
      err.attr("kind") = std::string(to_string(e.code()));
      if (e.offset()) err.attr("offset") = *e.offset();
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  m.def("read_oidt", &read_oidt, py::arg("path"), "Read an OIDT tensor as a numpy array.");
  m.def("write_oidt", &write_oidt, py::arg("path"), py::arg("array"),
        "Write a uint8 array as dtype 1, anything else as float32.");

  m.def("v_score", [](const std::vector<double>& q) { return segscore::v_score(q); }, py::arg("q"));
  m.def(
      "bls",
      [](const F64Array& probs) {
        const auto info = probs.request();
        require_ndim(info, 3, "segmentation map");
        const SegMap map(static_cast<int>(info.shape[0]), static_cast<int>(info.shape[1]),
                         static_cast<int>(info.shape[2]) - 1, to_vector(probs));
        return segscore::bls(map).value;
      },
      py::arg("probs"), "BLS of an h x w x (N+1) softmax map, background last.");

  m.def(
      "ssim",
      [](const F64Array& a, const F64Array& b, int window, double k1, double k2, double range) {
        return ssim::ssim(to_gray(a), to_gray(b), {window, k1, k2, range});
      },
      py::arg("a"), py::arg("b"), py::arg("window") = 7, py::arg("k1") = 0.01,
      py::arg("k2") = 0.03, py::arg("dynamic_range") = 1.0);

  m.def(
      "felzenszwalb",
      [](const F64Array& image, double k, int min_size, double sigma) {
        const auto s = felzseg::felzenszwalb(to_image(image), {k, min_size, sigma});
        py::array_t<std::int32_t> out({s.height, s.width});
        std::memcpy(out.mutable_data(), s.labels.data(), s.labels.size() * sizeof(std::int32_t));
        return out;
      },
      py::arg("image"), py::arg("k") = 100.0, py::arg("min_size") = 5,
      py::arg("smoothing_sigma") = 0.0);
  m.def(
      "n_r",
      [](const F64Array& image, double k, int min_size, double sigma, double rho, bool drop) {
        return from_binary(felzseg::n_r(to_image(image), {k, min_size, sigma}, {rho, drop}));
      },
      py::arg("image"), py::arg("k") = 100.0, py::arg("min_size") = 5,
      py::arg("smoothing_sigma") = 0.0, py::arg("rho") = 0.6,
      py::arg("drop_border_touching") = true);

  m.def(
      "auroc",
      [](const std::vector<double>& pos, const std::vector<double>& neg) {
        return eval::auroc(samples(pos, neg));
      },
      py::arg("positives"), py::arg("negatives"));
  m.def(
      "tnr_at_tpr",
      [](const std::vector<double>& pos, const std::vector<double>& neg, double target) {
        const auto r = eval::tnr_at_tpr(samples(pos, neg), target);
        return py::make_tuple(r.tnr, r.epsilon);
      },
      py::arg("positives"), py::arg("negatives"), py::arg("target_tpr") = 0.95);
  m.def(
      "calibrate_epsilon",
      [](const std::vector<double>& scores, double target) {
        return eval::calibrate_epsilon(scores, target);
      },
      py::arg("scores"), py::arg("target_tpr") = 0.95);
}
