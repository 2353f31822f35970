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

#include "oidd/toyseg.hpp"

#include <cmath>

#include "oidd/error.hpp"
#include "oidd/odinprep.hpp"

namespace oidd {

void ToySegmenter::validate() const {
  if (prototypes.empty()) throw Error(ErrorCode::kInvalidArgument, "toy segmenter needs N >= 1");
  if (!(sharpness > 0.0) || !(background_distance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "sharpness and background distance must be positive");
  }
  for (std::size_t i = 0; i < prototypes.size(); ++i) {
    for (std::size_t j = i + 1; j < prototypes.size(); ++j) {
      if (prototypes[i] == prototypes[j]) {
        throw Error(ErrorCode::kInvalidArgument, "toy segmenter prototypes must be distinct");
      }
    }
  }
}

SegMap toy_segment(const RgbImage& x, const ToySegmenter& s) {
  s.validate();
  const std::size_t n = s.prototypes.size();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(x.height()) * static_cast<std::size_t>(x.width()) *
               (n + 1));
  std::vector<double> logits(n + 1);
  for (int r = 0; r < x.height(); ++r) {
    for (int c = 0; c < x.width(); ++c) {
      const auto px = x.pixel(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        const auto& p = s.prototypes[k];
        const double d = std::sqrt((px[0] - p[0]) * (px[0] - p[0]) +
                                   (px[1] - p[1]) * (px[1] - p[1]) +
                                   (px[2] - p[2]) * (px[2] - p[2]));
        logits[k] = -s.sharpness * d;
      }
      logits[n] = -s.sharpness * s.background_distance;
      const auto probs = odin::softmax_t(logits, 1.0);
      data.insert(data.end(), probs.begin(), probs.end());
    }
  }
  return SegMap(x.height(), x.width(), static_cast<int>(n), std::move(data));
}

ToySegmentationBackend::ToySegmentationBackend(ToySegmenter s) : segmenter_(std::move(s)) {
  segmenter_.validate();
}

}  // namespace oidd
