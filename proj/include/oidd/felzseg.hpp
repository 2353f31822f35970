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

#include <cstdint>
#include <vector>

#include "oidd/image.hpp"

namespace oidd::felzseg {

struct SegmentLabeling {
  int height = 0;
  int width = 0;
  std::vector<std::int32_t> labels;  // row-major, dense ids in [0, num_segments)
  int num_segments = 0;

  std::int32_t at(int row, int col) const noexcept {
    return labels[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(col)];
  }
  std::vector<std::size_t> segment_sizes() const;
};

struct FelzParams {
  double k = 100.0;            // scale of observation; tau(C) = k / |C|
  int min_size = 5;            // smallest final segment, pixels
  double smoothing_sigma = 0;  // Gaussian pre-smoothing std; 0 disables
};

struct CenterParams {
  double rho = 0.6;  // central box side as a fraction of h and w, in (0, 1]
  bool drop_border_touching = true;
};

// Separable Gaussian blur, radius ceil(3 sigma), edge-clamped. sigma = 0
// returns the input unchanged.
RgbImage gaussian_smooth(const RgbImage& x, double sigma);

// Graph-based segmentation on the 8-connected grid. Edge weights are RGB
// Euclidean distances on the 0..255 scale; equal weights keep construction
// order (row-major source, then E, S, SE, SW).
SegmentLabeling felzenszwalb(const RgbImage& x, const FelzParams& p);

// A segment is background when its pixel centroid (pixel centers at
// row + 0.5, col + 0.5) falls outside the closed centered box of side
// rho*h x rho*w, or when drop_border_touching is set and it touches an image
// border. Every other pixel maps to 1.
BinaryMap remove_background(const SegmentLabeling& s, const CenterParams& c);

// Expert-guided relevance map: smoothing, felzenszwalb, remove_background.
BinaryMap n_r(const RgbImage& x, const FelzParams& p, const CenterParams& c);

}  // namespace oidd::felzseg
