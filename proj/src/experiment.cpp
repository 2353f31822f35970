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

#include "oidd/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>

#include "oidd/error.hpp"
#include "oidd/refdetect.hpp"
#include "oidd/segscore.hpp"
#include "oidd/tensorio.hpp"

namespace oidd::eval {

namespace {

const std::vector<std::string> kDetectors{"bls", "ods", "ssim", "baseline", "odin"};
const std::vector<std::string> kSplits{"in_dist_shifted", "ood", "ood_spurious", "ood_novel"};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

const SynthSplit& find_split(const std::vector<SynthSplit>& splits, const std::string& name) {
  for (const auto& s : splits) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kMissingSplit, "generator produced no split " + name);
}

// Items of the named evaluation split.
std::vector<const refdetect::LabeledItem*> select(const std::vector<SynthSplit>& splits,
                                                  const std::string& name) {
  std::vector<const refdetect::LabeledItem*> out;
  const std::string base = name.rfind("ood", 0) == 0 ? "ood" : name;
  for (const auto& item : find_split(splits, base).corpus.items) {
    if (name == "ood_spurious" && !ends_with(item.tag, ":spurious")) continue;
    if (name == "ood_novel" && !ends_with(item.tag, ":novel")) continue;
    out.push_back(&item);
  }
  return out;
}

template <typename T>
void get_if(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("key \"") + key + "\": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void to_json(Json& j, const SynthSpec& s) {
  j = Json{{"num_classes", s.num_classes}, {"side", s.side},
           {"samples_per_split", s.samples_per_split}, {"jitter", s.jitter},
           {"noise", s.noise}, {"seed", s.seed}, {"class_shapes", s.class_shapes},
           {"class_colors", s.class_colors}, {"palette_a", s.palette_a},
           {"palette_b", s.palette_b}};
}

void from_json(const Json& j, SynthSpec& s) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "synth spec must be an object");
  get_if(j, "num_classes", s.num_classes);
  get_if(j, "side", s.side);
  get_if(j, "samples_per_split", s.samples_per_split);
  get_if(j, "jitter", s.jitter);
  get_if(j, "noise", s.noise);
  get_if(j, "seed", s.seed);
  get_if(j, "class_shapes", s.class_shapes);
  get_if(j, "class_colors", s.class_colors);
  get_if(j, "palette_a", s.palette_a);
  get_if(j, "palette_b", s.palette_b);
}

void ExperimentConfig::validate() const {
  for (const auto& d : detectors) {
    if (std::find(kDetectors.begin(), kDetectors.end(), d) == kDetectors.end()) {
      throw Error(ErrorCode::kUnknownDetector, "unknown detector '" + d + "'");
    }
  }
  for (const auto& s : splits) {
    if (std::find(kSplits.begin(), kSplits.end(), s) == kSplits.end()) {
      throw Error(ErrorCode::kMissingSplit, "unknown split '" + s + "'");
    }
  }
  if (detectors.empty() || splits.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "config needs at least one detector and one split");
  }
  (void)synth.resolved();
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "experiment config must be an object");
  ExperimentConfig c;
  get_if(j, "detectors", c.detectors);
  get_if(j, "splits", c.splits);
  if (j.contains("synth")) c.synth = j["synth"].get<SynthSpec>();
  get_if(j, "seed", c.synth.seed);
  if (j.contains("params")) {
    const Json& p = j["params"];
    if (p.contains("toy")) c.toy = p["toy"].get<ToySegmenter>();
    get_if(p, "felz", c.felz);
    get_if(p, "center", c.center);
    get_if(p, "ssim", c.ssim);
    get_if(p, "odin", c.odin);
    get_if(p, "train", c.train);
  }
  c.validate();
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json params{{"felz", c.felz}, {"center", c.center}, {"ssim", c.ssim},
              {"odin", c.odin}, {"train", c.train}};
  if (c.toy) params["toy"] = *c.toy;
  return Json{{"detectors", c.detectors}, {"splits", c.splits}, {"seed", c.synth.seed},
              {"synth", c.synth}, {"params", params}};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const SynthSpec spec = config.synth.resolved();
  const auto splits = generate_synthetic(spec);
  const ToySegmentationBackend toy(config.toy ? *config.toy : default_toy_segmenter(spec));

  const auto& train = find_split(splits, "in_dist_train").corpus;
  std::unique_ptr<odin::LinearClassifier> clf;
  auto classifier = [&]() -> const odin::LinearClassifier& {
    if (!clf) {
      std::vector<RgbImage> images;
      std::vector<int> labels;
      for (const auto& item : train.items) {
        images.push_back(item.image);
        labels.push_back(item.label);
      }
      clf = std::make_unique<odin::LinearClassifier>(
          odin::train_linear_classifier(images, labels, spec.num_classes, config.train));
    }
    return *clf;
  };
  const auto relevance = refdetect::make_nr(config.felz, config.center);
  std::unique_ptr<refdetect::ReferenceSet> refs;
  auto reference_set = [&]() -> const refdetect::ReferenceSet& {
    if (!refs) {
      std::vector<int> labels;
      for (int y = 0; y < spec.num_classes; ++y) labels.push_back(y);
      refs = std::make_unique<refdetect::ReferenceSet>(
          refdetect::build_reference_set(train, labels, relevance, spec.seed));
    }
    return *refs;
  };

  auto score = [&](const std::string& detector, const RgbImage& x) -> double {
    if (detector == "bls") return segscore::bls(toy.segment(x)).value;
    if (detector == "ods") {
      return segscore::ods(x, classifier(), toy, config.odin.zeta, config.odin.temperature).value;
    }
    if (detector == "ssim") {
      return refdetect::score_relevance(relevance(x), reference_set(), config.ssim, 0.0).score;
    }
    if (detector == "baseline") return odin::baseline_score(x, classifier()).value;
    return odin::odin_score(x, classifier(), config.odin).value;
  };

  ExperimentResult result;
  for (const auto& detector : config.detectors) {
    std::vector<ScoredSample> positives;
    for (const auto* item : select(splits, "in_dist_test")) {
      positives.push_back({score(detector, item->image), Truth::kInDistribution, item->tag});
      result.rows.push_back({item->tag, Truth::kInDistribution, detector, "in_dist_test",
                             positives.back().score});
    }
    for (const auto& split : config.splits) {
      std::vector<ScoredSample> samples = positives;
      for (const auto* item : select(splits, split)) {
        const double s = score(detector, item->image);
        // Shifted items are in-distribution by ground truth; the report
        // still measures their separation from the positives.
        const Truth truth = split == "in_dist_shifted" ? Truth::kInDistribution : Truth::kOod;
        samples.push_back({s, Truth::kOod, item->tag});
        result.rows.push_back({item->tag, truth, detector, split, s});
      }
      result.reports.push_back({detector, split, evaluate(samples)});
    }
  }
  return result;
}

Json report_to_json(const SplitReport& r) {
  Json roc = Json::array();
  for (const auto& p : r.report.roc) roc.push_back({p.fpr, p.tpr});
  return Json{{"detector", r.detector},
              {"split", r.split},
              {"auroc", r.report.auroc},
              {"tnr_at_95tpr", r.report.tnr_at_95tpr},
              {"epsilon", r.report.epsilon_at_95tpr},
              {"positives", r.report.positives},
              {"negatives", r.report.negatives},
              {"roc", roc}};
}

std::string scores_csv(const std::vector<ScoreRow>& rows) {
  std::string out = "tag,truth,detector,score\n";
  for (const auto& r : rows) {
    out += r.tag + ',' + (r.truth == Truth::kInDistribution ? "in_distribution" : "ood") + ',' +
           r.detector + ',' + format_double(r.score) + '\n';
  }
  return out;
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  auto write_text = [&](const char* name, const std::string& text) {
    tensorio::write_file_bytes(
        dir / name, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  };
  Json reports = Json::array();
  std::string roc = "detector,split,fpr,tpr\n";
  for (const auto& r : result.reports) {
    reports.push_back(report_to_json(r));
    for (const auto& p : r.report.roc) {
      roc += r.detector + ',' + r.split + ',' + format_double(p.fpr) + ',' + format_double(p.tpr) + '\n';
    }
  }
  write_text("reports.json", reports.dump(2) + "\n");
  write_text("scores.csv", scores_csv(result.rows));
  write_text("roc.csv", roc);
}

}  // namespace oidd::eval
