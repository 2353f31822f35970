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

#include "oidd/segscore.hpp"

#include <string>

#include "oidd/error.hpp"
#include "oidd/tensorio.hpp"

namespace oidd::segscore {

FileSegmentationBackend::FileSegmentationBackend(std::filesystem::path path, int num_classes)
    : path_(std::move(path)), num_classes_(num_classes) {}

SegMap FileSegmentationBackend::segment(const RgbImage& x) const {
  SegMap map = tensorio::as_segmap(tensorio::read_tensor(path_), num_classes_);
  if (map.height() != x.height() || map.width() != x.width()) {
    throw Error(ErrorCode::kShapeMismatch,
                "segmentation " + path_.string() + " is " + std::to_string(map.height()) + "x" +
                    std::to_string(map.width()) + ", image is " + std::to_string(x.height()) +
                    "x" + std::to_string(x.width()));
  }
  return map;
}

double v_score(std::span<const double> q) {
  const std::size_t background = q.size() - 1;
  double best = q[0];
  for (std::size_t i = 1; i < background; ++i) {
    if (q[i] > best) best = q[i];
  }
  return q[background] > best ? 0.0 : best;
}

DetectionScore bls(const SegMap& map) {
  double total = 0.0;
  std::size_t foreground = 0;
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      const double v = v_score(map.pixel(r, c));
      if (v != 0.0) {
        total += v;
        ++foreground;
      }
    }
  }
  const double value = foreground == 0 ? 0.0 : total / static_cast<double>(foreground);
  return {value, ScoreKind::kBls};
}

DetectionScore ods(const RgbImage& x, const odin::LinearClassifier& clf,
                   const SegmentationBackend& seg, double zeta, double temperature) {
  const RgbImage perturbed = odin::perturb(x, clf, {zeta, temperature});
  return {bls(seg.segment(perturbed)).value, ScoreKind::kOds};
}

int verdict(double score, double eps) { return score < eps ? 1 : 0; }

namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in [0, 1]");
  }
}

}  // namespace

int detect_alg2(const RgbImage& t, const SegmentationBackend& seg, double eps) {
  check_eps(eps);
  return verdict(bls(seg.segment(t)).value, eps);
}

int detect_alg2(const RgbImage& t, const SegmentationBackend& seg,
                const odin::LinearClassifier& clf, const odin::OdinParams& params, double eps) {
  check_eps(eps);
  return verdict(ods(t, clf, seg, params.zeta, params.temperature).value, eps);
}

}  // namespace oidd::segscore
