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

#include <filesystem>
#include <span>

#include "oidd/image.hpp"
#include "oidd/odinprep.hpp"

namespace oidd::segscore {

// The semantic segmentation map consumed by BLS and ODS.
class SegmentationBackend {
 public:
  virtual ~SegmentationBackend() = default;
  virtual SegMap segment(const RgbImage& x) const = 0;
};

// Serves a segmentation produced outside the library, stored as an OIDT
// float32 h x w x (N+1) tensor. The image passed to segment() only fixes the
// expected spatial shape. Each call reads the file afresh, so distinct
// instances may be used from concurrent threads.
class FileSegmentationBackend final : public SegmentationBackend {
 public:
  FileSegmentationBackend(std::filesystem::path path, int num_classes);
  SegMap segment(const RgbImage& x) const override;

 private:
  std::filesystem::path path_;
  int num_classes_;
};

// max_i q_i when the argmax is a class, 0 when it is background (last
// entry). Class-vs-background ties go to the class.
double v_score(std::span<const double> q);

// Mean of V over the pixels where V != 0; 0 when that set is empty.
DetectionScore bls(const SegMap& map);

// BLS of the segmentation of the ODIN-perturbed input. The gradient comes
// from the classifier, the segmentation from `seg`.
DetectionScore ods(const RgbImage& x, const odin::LinearClassifier& clf,
                   const SegmentationBackend& seg, double zeta, double temperature);

// Thresholding rule shared by every detector: 1 (OOD) iff score < eps.
int verdict(double score, double eps);

// Detection with a segmentation network and BLS.
int detect_alg2(const RgbImage& t, const SegmentationBackend& seg, double eps);
// Detection with a segmentation network and ODS.
int detect_alg2(const RgbImage& t, const SegmentationBackend& seg,
                const odin::LinearClassifier& clf, const odin::OdinParams& params, double eps);

}  // namespace oidd::segscore
