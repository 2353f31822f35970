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
#include <cstdint>
#include <string>
#include <vector>

#include "oidd/image.hpp"
#include "oidd/refdetect.hpp"
#include "oidd/toyseg.hpp"

namespace oidd::eval {

using Color = std::array<double, 3>;

inline constexpr int kNumClassShapes = 10;
inline constexpr int kNumNovelShapes = 4;

// Desk-scale dataset. Each class draws one fixed shape in one fixed color.
// Training-style images put class y on background palette_a[y], so the
// background is a spurious cue for the label; shifted images use palette_b
// uniformly at random.
struct SynthSpec {
  int num_classes = 10;          // <= kNumClassShapes
  int side = 28;
  int samples_per_split = 200;
  int jitter = 0;                // max shape center offset, pixels, per axis
  double noise = 0.05;           // uniform per-channel noise amplitude, [0, 1)
  std::uint64_t seed = 42;
  std::vector<int> class_shapes;      // shape id per class; default identity
  std::vector<Color> class_colors;    // foreground color per class
  std::vector<Color> palette_a;       // one background per class
  std::vector<Color> palette_b;       // shifted backgrounds

  // Fills empty lists with the defaults and validates. Throws InvalidArgument.
  SynthSpec resolved() const;
};

struct SynthSplit {
  std::string name;
  refdetect::LabeledCorpus corpus;  // OOD items carry label -1
  std::vector<BinaryMap> masks;     // ground-truth foreground per item
};

// Four splits, in this order:
//   in_dist_train   - class shapes on palette A (classifier / reference set)
//   in_dist_test    - held-out draw from the same distribution (positives)
//   in_dist_shifted - class shapes on palette B
//   ood             - alternating background-only palette-A images (tag
//                     "spurious") and novel shapes (tag "novel")
// Labels cycle 0..N-1 within each split. Deterministic in the seed.
std::vector<SynthSplit> generate_synthetic(const SynthSpec& spec);

// Foreground membership of shape `shape_id` (class shapes 0..9, novel shapes
// 100..103) at offset (dy, dx) from the shape center.
bool shape_contains(int shape_id, double dy, double dx);

// Toy segmenter whose prototypes are the class colors.
ToySegmenter default_toy_segmenter(const SynthSpec& spec);

}  // namespace oidd::eval
