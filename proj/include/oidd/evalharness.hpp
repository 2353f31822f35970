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

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oidd::eval {

enum class Truth { kInDistribution, kOod };

// Higher score = more in-distribution. In-distribution samples are the
// positives.
struct ScoredSample {
  double score = 0.0;
  Truth truth = Truth::kInDistribution;
  std::string tag;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  bool operator==(const RocPoint&) const = default;
};

struct EvalReport {
  std::vector<RocPoint> roc;
  double auroc = 0.0;
  double tnr_at_95tpr = 0.0;
  double epsilon_at_95tpr = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// ROC over thresholds {-inf, distinct scores, +inf}; a sample is accepted
// at threshold e when score >= e. Points are deduplicated and sorted by FPR
// then TPR. Throws DegenerateLabels without both classes present.
std::vector<RocPoint> roc_curve(std::span<const ScoredSample> samples);

// Trapezoidal area under roc_curve, accumulated in integer counts so it is
// exactly the Mann-Whitney statistic.
double auroc(std::span<const ScoredSample> samples);

// P(pos > neg) + P(pos == neg) / 2 by sorting and tie-block ranks.
double mann_whitney_auroc(std::span<const ScoredSample> samples);

struct TnrResult {
  double tnr = 0.0;
  double epsilon = 0.0;
};

// Largest distinct positive-side threshold keeping TPR >= target_tpr, and
// the fraction of negatives below it. target_tpr must lie in (0, 1].
TnrResult tnr_at_tpr(std::span<const ScoredSample> samples, double target_tpr = 0.95);

// Threshold calibration from in-distribution scores alone: the largest
// observed score e with #{s >= e} / n >= target_tpr.
double calibrate_epsilon(std::span<const double> in_dist_scores, double target_tpr = 0.95);

EvalReport evaluate(std::span<const ScoredSample> samples);

}  // namespace oidd::eval
