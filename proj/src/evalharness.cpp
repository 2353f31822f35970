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

#include "oidd/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "oidd/error.hpp"

namespace oidd::eval {

namespace {

struct Counts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

Counts count_labels(std::span<const ScoredSample> samples) {
  Counts c;
  for (const auto& s : samples) {
    if (!std::isfinite(s.score)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite score for sample '" + s.tag + "'");
    }
    (s.truth == Truth::kInDistribution ? c.positives : c.negatives)++;
  }
  if (c.positives == 0 || c.negatives == 0) {
    throw Error(ErrorCode::kDegenerateLabels,
                "need at least one in-distribution and one OOD sample (got " +
                    std::to_string(c.positives) + " / " + std::to_string(c.negatives) + ")");
  }
  return c;
}

// Per distinct score, descending: (positives, negatives) sharing that score.
struct TieBlock {
  double score;
  std::int64_t pos;
  std::int64_t neg;
};

std::vector<TieBlock> tie_blocks_descending(std::span<const ScoredSample> samples) {
  std::vector<const ScoredSample*> order;
  order.reserve(samples.size());
  for (const auto& s : samples) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const ScoredSample* a, const ScoredSample* b) { return a->score > b->score; });
  std::vector<TieBlock> blocks;
  for (const auto* s : order) {
    if (blocks.empty() || blocks.back().score != s->score) blocks.push_back({s->score, 0, 0});
    (s->truth == Truth::kInDistribution ? blocks.back().pos : blocks.back().neg)++;
  }
  return blocks;
}

void check_target(double target_tpr) {
  if (!(target_tpr > 0.0 && target_tpr <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target TPR must lie in (0, 1]");
  }
}

}  // namespace

std::vector<RocPoint> roc_curve(std::span<const ScoredSample> samples) {
  const Counts counts = count_labels(samples);
  const auto p = static_cast<double>(counts.positives);
  const auto n = static_cast<double>(counts.negatives);
  std::vector<RocPoint> points{{0.0, 0.0}};  // threshold +inf
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  for (const auto& block : tie_blocks_descending(samples)) {
    tp += block.pos;
    fp += block.neg;
    points.push_back({static_cast<double>(fp) / n, static_cast<double>(tp) / p});
  }
  points.push_back({1.0, 1.0});  // threshold -inf
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

double auroc(std::span<const ScoredSample> samples) {
  const Counts counts = count_labels(samples);
  // Twice the area in units of 1 / (P N).
  std::int64_t twice_area = 0;
  std::int64_t tp = 0;
  for (const auto& block : tie_blocks_descending(samples)) {
    const std::int64_t tp_next = tp + block.pos;
    twice_area += block.neg * (tp + tp_next);
    tp = tp_next;
  }
  return static_cast<double>(twice_area) /
         (2.0 * static_cast<double>(counts.positives) * static_cast<double>(counts.negatives));
}

double mann_whitney_auroc(std::span<const ScoredSample> samples) {
  const Counts counts = count_labels(samples);
  std::vector<std::pair<double, bool>> sorted;
  sorted.reserve(samples.size());
  for (const auto& s : samples) sorted.emplace_back(s.score, s.truth == Truth::kInDistribution);
  std::sort(sorted.begin(), sorted.end());

  // 2U = sum over positives of 2 * (#negatives strictly below) + (#tied negatives).
  std::int64_t twice_u = 0;
  std::int64_t neg_below = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    std::int64_t pos_here = 0;
    std::int64_t neg_here = 0;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) {
      (sorted[j].second ? pos_here : neg_here)++;
      ++j;
    }
    twice_u += pos_here * (2 * neg_below + neg_here);
    neg_below += neg_here;
    i = j;
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(counts.positives) * static_cast<double>(counts.negatives));
}

TnrResult tnr_at_tpr(std::span<const ScoredSample> samples, double target_tpr) {
  check_target(target_tpr);
  const Counts counts = count_labels(samples);
  const auto p = static_cast<double>(counts.positives);
  std::int64_t accepted = 0;
  double epsilon = 0.0;
  for (const auto& block : tie_blocks_descending(samples)) {
    accepted += block.pos;
    if (static_cast<double>(accepted) / p >= target_tpr) {
      epsilon = block.score;
      break;
    }
  }
  std::size_t rejected = 0;
  for (const auto& s : samples) {
    if (s.truth == Truth::kOod && s.score < epsilon) ++rejected;
  }
  return {static_cast<double>(rejected) / static_cast<double>(counts.negatives), epsilon};
}

double calibrate_epsilon(std::span<const double> in_dist_scores, double target_tpr) {
  check_target(target_tpr);
  if (in_dist_scores.empty()) {
    throw Error(ErrorCode::kDegenerateLabels, "calibration needs in-distribution scores");
  }
  std::vector<double> sorted(in_dist_scores.begin(), in_dist_scores.end());
  for (double s : sorted) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "non-finite score");
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Only evaluate at the end of each tie block.
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    if (static_cast<double>(i + 1) / n >= target_tpr) return sorted[i];
  }
  return sorted.back();
}

EvalReport evaluate(std::span<const ScoredSample> samples) {
  const Counts counts = count_labels(samples);
  EvalReport report;
  report.roc = roc_curve(samples);
  report.auroc = auroc(samples);
  const auto tnr = tnr_at_tpr(samples, 0.95);
  report.tnr_at_95tpr = tnr.tnr;
  report.epsilon_at_95tpr = tnr.epsilon;
  report.positives = counts.positives;
  report.negatives = counts.negatives;
  return report;
}

}  // namespace oidd::eval
