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
#include <optional>
#include <string>
#include <vector>

#include "oidd/config.hpp"
#include "oidd/evalharness.hpp"
#include "oidd/felzseg.hpp"
#include "oidd/odinprep.hpp"
#include "oidd/ssim.hpp"
#include "oidd/synth.hpp"
#include "oidd/toyseg.hpp"

namespace oidd::eval {

// Detector names: "bls", "ods", "ssim", "baseline", "odin".
// Split names: "in_dist_shifted", "ood", "ood_spurious", "ood_novel". Every
// report uses in_dist_test as the positives and the named split as the
// negatives, so an AUROC near 0.5 on in_dist_shifted means the detector
// does not separate shifted in-distribution data.
void to_json(Json& j, const SynthSpec& s);
void from_json(const Json& j, SynthSpec& s);

struct ExperimentConfig {
  SynthSpec synth;
  std::vector<std::string> detectors{"bls", "ods", "ssim", "baseline", "odin"};
  std::vector<std::string> splits{"in_dist_shifted", "ood_spurious", "ood_novel"};
  std::optional<ToySegmenter> toy;  // default: prototypes = class colors
  felzseg::FelzParams felz;
  felzseg::CenterParams center;
  ssim::SsimParams ssim;
  odin::OdinParams odin;
  odin::TrainParams train;

  // Throws UnknownDetector / MissingSplit / InvalidConfig.
  void validate() const;
};

// {"detectors": [...], "splits": [...], "seed": S, "synth": {...},
//  "params": {"toy", "felz", "center", "ssim", "odin", "train"}}
ExperimentConfig experiment_config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);

struct ScoreRow {
  std::string tag;
  Truth truth;
  std::string detector;
  std::string split;
  double score;
};

struct SplitReport {
  std::string detector;
  std::string split;
  EvalReport report;
};

struct ExperimentResult {
  std::vector<SplitReport> reports;  // detector-major, config order
  std::vector<ScoreRow> rows;        // detector-major, then split, then item order
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes reports.json, scores.csv (tag,truth,detector,score) and roc.csv
// (detector,split,fpr,tpr) into `dir`.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result);

Json report_to_json(const SplitReport& r);
std::string scores_csv(const std::vector<ScoreRow>& rows);

}  // namespace oidd::eval
