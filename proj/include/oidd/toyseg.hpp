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

#pragma once

#include <array>
#include <vector>

#include "oidd/image.hpp"
#include "oidd/segscore.hpp"

namespace oidd {

// Nearest-prototype soft segmenter standing in for a trained network.
// Per pixel: logits_i = -sharpness * ||pixel - prototype_i|| for each class
// and -sharpness * background_distance for background, then softmax.
struct ToySegmenter {
  std::vector<std::array<double, 3>> prototypes;
  double sharpness = 20.0;
  double background_distance = 0.25;

  // Throws InvalidArgument on empty or duplicate prototypes or non-positive
  // sharpness / background distance.
  void validate() const;
  int num_classes() const noexcept { return static_cast<int>(prototypes.size()); }
};

SegMap toy_segment(const RgbImage& x, const ToySegmenter& s);

class ToySegmentationBackend final : public segscore::SegmentationBackend {
 public:
  explicit ToySegmentationBackend(ToySegmenter s);
  SegMap segment(const RgbImage& x) const override { return toy_segment(x, segmenter_); }

 private:
  ToySegmenter segmenter_;
};

}  // namespace oidd
