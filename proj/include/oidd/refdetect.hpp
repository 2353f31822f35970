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
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oidd/felzseg.hpp"
#include "oidd/image.hpp"
#include "oidd/ssim.hpp"

namespace oidd::refdetect {

struct LabeledItem {
  RgbImage image;
  int label = 0;  // class in [0, N); -1 for samples outside Y
  std::string tag;
};

struct LabeledCorpus {
  std::vector<LabeledItem> items;
};

struct ReferenceEntry {
  int label = 0;
  BinaryMap map;
};

struct ReferenceSet {
  std::vector<ReferenceEntry> entries;  // one per label, ascending
  std::uint64_t seed = 0;
};

// Maps an image to its relevance map.
using RelevanceFn = std::function<BinaryMap(const RgbImage&)>;

// The default relevance pipeline: felzseg::n_r with fixed parameters.
RelevanceFn make_nr(const felzseg::FelzParams& p, const felzseg::CenterParams& c);

// One uniformly drawn item per label in `labels` (ascending order, items in
// corpus order, one draw each from a generator seeded with `seed`), mapped
// through `relevance`. Throws EmptyClass naming the first label with no
// items.
ReferenceSet build_reference_set(const LabeledCorpus& corpus, const std::vector<int>& labels,
                                 const RelevanceFn& relevance, std::uint64_t seed);

struct ReferenceDetection {
  int verdict = 0;     // 1 = OOD
  double score = 0.0;  // max SSIM against the references
  int nearest = -1;    // label of the best reference; ties go to the smallest
};

// Scores a precomputed relevance map against the reference set.
ReferenceDetection score_relevance(const BinaryMap& relevance, const ReferenceSet& refs,
                           const ssim::SsimParams& p, double eps);

ReferenceDetection detect_alg3(const RgbImage& t, const RelevanceFn& relevance,
                       const ReferenceSet& refs, const ssim::SsimParams& p, double eps);

// Directory of OIDT uint8 maps plus manifest.json:
//   {"seed", "ssim_params", "felz_params", "center_params", "params_hash",
//    "entries": [{"label", "path"}]}
void save_reference_set(const std::filesystem::path& dir, const ReferenceSet& refs,
                        const ssim::SsimParams& sp, const felzseg::FelzParams& fp,
                        const felzseg::CenterParams& cp);

struct LoadedReferenceSet {
  ReferenceSet refs;
  ssim::SsimParams ssim_params;
  felzseg::FelzParams felz_params;
  felzseg::CenterParams center_params;
};

LoadedReferenceSet load_reference_set(const std::filesystem::path& dir);

}  // namespace oidd::refdetect
