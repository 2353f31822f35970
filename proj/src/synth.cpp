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

#include "oidd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "oidd/error.hpp"
#include "oidd/rng.hpp"

namespace oidd::eval {

namespace {

constexpr int kNovelBase = 100;

const std::vector<Color> kClassColors = {
    {1.0, 0.2, 0.2}, {0.2, 1.0, 0.2}, {0.2, 0.4, 1.0}, {1.0, 1.0, 0.2}, {1.0, 0.2, 1.0},
    {0.2, 1.0, 1.0}, {1.0, 0.6, 0.1}, {0.7, 0.3, 1.0}, {1.0, 1.0, 1.0}, {0.6, 1.0, 0.6},
};

const std::vector<Color> kPaletteA = {
    {0.11, 0.11, 0.66}, {0.11, 0.55, 0.22}, {0.66, 0.11, 0.11}, {0.55, 0.55, 0.11},
    {0.11, 0.44, 0.55}, {0.44, 0.11, 0.55}, {0.33, 0.33, 0.33}, {0.66, 0.33, 0.11},
    {0.11, 0.22, 0.11}, {0.22, 0.11, 0.33},
};

const std::vector<Color> kPaletteB = {
    {0.35, 0.20, 0.10}, {0.10, 0.30, 0.30}, {0.25, 0.10, 0.20},
    {0.15, 0.30, 0.15}, {0.30, 0.30, 0.30},
};

double rand_noise(Rng& rng, double amplitude) {
  return amplitude == 0.0 ? 0.0 : amplitude * (2.0 * uniform01(rng) - 1.0);
}

struct Draw {
  int shape;  // -1 for background only
  Color fg;
  Color bg;
};

void render(const SynthSpec& spec, const Draw& d, Rng& rng, std::vector<double>& pixels,
            std::vector<std::uint8_t>& mask) {
  const int side = spec.side;
  const double center = 0.5 * (side - 1);
  const auto span = static_cast<std::uint64_t>(2 * spec.jitter + 1);
  const double cy = center + static_cast<double>(uniform_index(rng, span)) - spec.jitter;
  const double cx = center + static_cast<double>(uniform_index(rng, span)) - spec.jitter;
  // Shapes are drawn at a fixed scale relative to a 28-pixel canvas.
  const double scale = side / 28.0;
  pixels.assign(static_cast<std::size_t>(side) * static_cast<std::size_t>(side) * 3, 0.0);
  mask.assign(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), 0);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const auto p = static_cast<std::size_t>(r) * static_cast<std::size_t>(side) +
                     static_cast<std::size_t>(c);
      const bool inside =
          d.shape >= 0 && shape_contains(d.shape, (r - cy) / scale, (c - cx) / scale);
      mask[p] = inside ? 1 : 0;
      const Color& base = inside ? d.fg : d.bg;
      for (std::size_t ch = 0; ch < 3; ++ch) {
        pixels[p * 3 + ch] = std::clamp(base[ch] + rand_noise(rng, spec.noise), 0.0, 1.0);
      }
    }
  }
}

SynthSplit make_split(const SynthSpec& spec, const std::string& name, std::uint64_t stream,
                      int kind) {
  Rng rng(derive_seed(spec.seed, stream));
  SynthSplit split;
  split.name = name;
  std::vector<double> pixels;
  std::vector<std::uint8_t> mask;
  for (int i = 0; i < spec.samples_per_split; ++i) {
    const int label = i % spec.num_classes;
    const auto y = static_cast<std::size_t>(label);
    Draw d{spec.class_shapes[y], spec.class_colors[y], spec.palette_a[y]};
    std::string tag;
    int item_label = label;
    if (kind == 1) {
      d.bg = spec.palette_b[uniform_index(rng, spec.palette_b.size())];
    } else if (kind == 2) {
      item_label = -1;
      const auto spurious_class = uniform_index(rng, static_cast<std::uint64_t>(spec.num_classes));
      d.bg = spec.palette_a[spurious_class];
      if (i % 2 == 0) {
        d.shape = -1;
        tag = "spurious";
      } else {
        d.shape = kNovelBase + static_cast<int>(uniform_index(rng, kNumNovelShapes));
        d.fg = spec.class_colors[uniform_index(rng, static_cast<std::uint64_t>(spec.num_classes))];
        tag = "novel";
      }
    }
    render(spec, d, rng, pixels, mask);
    char id[64];
    std::snprintf(id, sizeof id, "%s/%04d", name.c_str(), i);
    split.corpus.items.push_back(
        {RgbImage(spec.side, spec.side, pixels), item_label, tag.empty() ? id : std::string(id) + ":" + tag});
    split.masks.emplace_back(spec.side, spec.side, mask);
  }
  return split;
}

}  // namespace

bool shape_contains(int shape_id, double dy, double dx) {
  const double ady = std::abs(dy);
  const double adx = std::abs(dx);
  const double rr = dy * dy + dx * dx;
  switch (shape_id) {
    case 0: return rr <= 7.0 * 7.0;                                        // disk
    case 1: return rr <= 7.5 * 7.5 && rr >= 4.0 * 4.0;                     // ring
    case 2: return ady <= 6.0 && adx <= 6.0;                               // square
    case 3: return std::max(ady, adx) <= 7.0 && std::max(ady, adx) >= 5.0;  // frame
    case 4: return (ady <= 1.5 && adx <= 7.5) || (adx <= 1.5 && ady <= 7.5);  // plus
    case 5:                                                                 // cross
      return ady <= 7.0 && adx <= 7.0 &&
             (std::abs(dy - dx) <= 1.5 || std::abs(dy + dx) <= 1.5);
    case 6: return ady <= 2.5 && adx <= 8.5;                               // wide bar
    case 7: return adx <= 2.5 && ady <= 8.5;                               // tall bar
    case 8: return dy >= -7.0 && dy <= 7.0 && adx <= 0.5 * (dy + 7.0) + 0.5;  // triangle
    case 9: return adx + ady <= 8.0;                                       // diamond
    case kNovelBase + 0:                                                   // two dots
      return dy * dy + (dx - 6.0) * (dx - 6.0) <= 9.0 || dy * dy + (dx + 6.0) * (dx + 6.0) <= 9.0;
    case kNovelBase + 1:                                                   // L
      return (dx >= -7.0 && dx <= -3.5 && ady <= 7.0) || (dy >= 3.5 && dy <= 7.0 && adx <= 7.0);
    case kNovelBase + 2:                                                   // T
      return (dy >= -7.0 && dy <= -3.5 && adx <= 7.0) || (adx <= 1.5 && ady <= 7.0);
    case kNovelBase + 3:                                                   // four blocks
      return adx >= 3.5 && adx <= 7.0 && ady >= 3.5 && ady <= 7.0;
    default: return false;
  }
}

SynthSpec SynthSpec::resolved() const {
  SynthSpec s = *this;
  if (s.num_classes < 1 || s.num_classes > kNumClassShapes) {
    throw Error(ErrorCode::kInvalidArgument, "num_classes must lie in [1, 10]");
  }
  if (s.side < 8 || s.samples_per_split < 1 || s.jitter < 0) {
    throw Error(ErrorCode::kInvalidArgument, "side >= 8, samples >= 1, jitter >= 0 required");
  }
  if (!(s.noise >= 0.0 && s.noise < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise must lie in [0, 1)");
  }
  const auto n = static_cast<std::size_t>(s.num_classes);
  if (s.class_shapes.empty()) {
    for (int i = 0; i < s.num_classes; ++i) s.class_shapes.push_back(i);
  }
  if (s.class_colors.empty()) s.class_colors.assign(kClassColors.begin(), kClassColors.begin() + s.num_classes);
  if (s.palette_a.empty()) s.palette_a.assign(kPaletteA.begin(), kPaletteA.begin() + s.num_classes);
  if (s.palette_b.empty()) s.palette_b = kPaletteB;
  if (s.class_shapes.size() != n || s.class_colors.size() != n || s.palette_a.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "class_shapes, class_colors and palette_a need one entry per class");
  }
  for (int shape : s.class_shapes) {
    if (shape < 0 || shape >= kNumClassShapes) {
      throw Error(ErrorCode::kInvalidArgument, "class shape ids must lie in [0, 10)");
    }
  }
  auto in_unit = [](const Color& c) {
    return std::all_of(c.begin(), c.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
  };
  for (const auto* list : {&s.class_colors, &s.palette_a, &s.palette_b}) {
    if (!std::all_of(list->begin(), list->end(), in_unit)) {
      throw Error(ErrorCode::kInvalidArgument, "colors must lie in [0, 1]^3");
    }
  }
  if (s.palette_b.empty()) throw Error(ErrorCode::kInvalidArgument, "palette_b is empty");
  return s;
}

std::vector<SynthSplit> generate_synthetic(const SynthSpec& raw) {
  const SynthSpec spec = raw.resolved();
  std::vector<SynthSplit> splits;
  splits.push_back(make_split(spec, "in_dist_train", 0, 0));
  splits.push_back(make_split(spec, "in_dist_test", 1, 0));
  splits.push_back(make_split(spec, "in_dist_shifted", 2, 1));
  splits.push_back(make_split(spec, "ood", 3, 2));
  return splits;
}

ToySegmenter default_toy_segmenter(const SynthSpec& spec) {
  const SynthSpec s = spec.resolved();
  ToySegmenter seg;
  seg.prototypes = s.class_colors;
  return seg;
}

}  // namespace oidd::eval
