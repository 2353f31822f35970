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

// oidd: out-of-intended-distribution detection from the command line.
//
// Exit codes: 0 success / in-distribution, 1 OOD verdict, 2 usage error,
// 3 data error. Errors are printed to stderr as one JSON object.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oidd/config.hpp"
#include "oidd/error.hpp"
#include "oidd/experiment.hpp"
#include "oidd/felzseg.hpp"
#include "oidd/odinprep.hpp"
#include "oidd/refdetect.hpp"
#include "oidd/segscore.hpp"
#include "oidd/ssim.hpp"
#include "oidd/synth.hpp"
#include "oidd/tensorio.hpp"
#include "oidd/toyseg.hpp"

namespace fs = std::filesystem;
using oidd::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOod = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared parameter file. Relative paths resolve against the file's directory.
struct Params {
  std::string segmenter = "toy";  // toy | file
  oidd::ToySegmenter toy = oidd::eval::default_toy_segmenter({});
  std::optional<fs::path> segmap;  // file segmenter; default <image>.oidt
  oidd::felzseg::FelzParams felz;
  oidd::felzseg::CenterParams center;
  oidd::ssim::SsimParams ssim;
  oidd::odin::OdinParams odin;
  oidd::odin::TrainParams train;
  std::optional<fs::path> classifier;
  std::optional<fs::path> refset;
  std::optional<int> classes;  // class count for file maps; default: toy prototypes

  int num_classes() const { return classes.value_or(toy.num_classes()); }
};

Params load_params(const std::string& path) {
  Params p;
  if (path.empty()) return p;
  const Json j = oidd::read_json_file(path);
  if (!j.is_object()) throw oidd::Error(oidd::ErrorCode::kInvalidConfig, "params must be an object");
  const fs::path base = fs::path(path).parent_path();
  auto rel = [&](const std::string& v) { return fs::path(v).is_absolute() ? fs::path(v) : base / v; };
  try {
    if (j.contains("segmenter")) p.segmenter = j["segmenter"].get<std::string>();
    if (j.contains("toy")) p.toy = j["toy"].get<oidd::ToySegmenter>();
    if (j.contains("segmap")) p.segmap = rel(j["segmap"].get<std::string>());
    if (j.contains("felz")) p.felz = j["felz"].get<oidd::felzseg::FelzParams>();
    if (j.contains("center")) p.center = j["center"].get<oidd::felzseg::CenterParams>();
    if (j.contains("ssim")) p.ssim = j["ssim"].get<oidd::ssim::SsimParams>();
    if (j.contains("odin")) p.odin = j["odin"].get<oidd::odin::OdinParams>();
    if (j.contains("train")) p.train = j["train"].get<oidd::odin::TrainParams>();
    if (j.contains("classifier")) p.classifier = rel(j["classifier"].get<std::string>());
    if (j.contains("refset")) p.refset = rel(j["refset"].get<std::string>());
    if (j.contains("num_classes")) p.classes = j["num_classes"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw oidd::Error(oidd::ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
  if (p.segmenter != "toy" && p.segmenter != "file") {
    throw oidd::Error(oidd::ErrorCode::kInvalidConfig, "segmenter must be \"toy\" or \"file\"");
  }
  p.toy.validate();
  if (p.classes && *p.classes < 1) {
    throw oidd::Error(oidd::ErrorCode::kInvalidConfig, "num_classes must be >= 1");
  }
  return p;
}

Json params_to_json(const Params& p) {
  return Json{{"segmenter", p.segmenter}, {"toy", p.toy},   {"felz", p.felz},
              {"center", p.center},       {"ssim", p.ssim}, {"odin", p.odin},
              {"train", p.train}};
}

void write_text(const fs::path& path, const std::string& text) {
  oidd::tensorio::write_file_bytes(
      path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// ---- corpus directories -------------------------------------------------

struct CorpusEntry {
  fs::path image;
  int label;
  std::string tag;
};

std::vector<CorpusEntry> read_corpus(const fs::path& dir) {
  const Json j = oidd::read_json_file((dir / "labels.json").string());
  std::vector<CorpusEntry> out;
  try {
    for (const auto& item : j.at("items")) {
      out.push_back({dir / item.at("image").get<std::string>(), item.at("label").get<int>(),
                     item.value("tag", std::string())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw oidd::Error(oidd::ErrorCode::kInvalidConfig, (dir / "labels.json").string() + ": " + e.what());
  }
  return out;
}

oidd::refdetect::LabeledCorpus load_corpus(const fs::path& dir) {
  oidd::refdetect::LabeledCorpus corpus;
  for (const auto& e : read_corpus(dir)) {
    corpus.items.push_back({oidd::tensorio::read_image(e.image), e.label, e.tag});
  }
  return corpus;
}

// ---- detectors ----------------------------------------------------------

class Detector {
 public:
  Detector(std::string name, Params params) : name_(std::move(name)), params_(std::move(params)) {
    if (name_ == "ods" || name_ == "baseline" || name_ == "odin") {
      if (!params_.classifier) {
        throw oidd::Error(oidd::ErrorCode::kInvalidConfig,
                          "detector " + name_ + " needs \"classifier\" in params");
      }
      clf_ = std::make_unique<oidd::odin::LinearClassifier>(
          oidd::odin::read_classifier(*params_.classifier));
    } else if (name_ == "ssim") {
      if (!params_.refset) {
        throw oidd::Error(oidd::ErrorCode::kInvalidConfig, "detector ssim needs \"refset\" in params");
      }
      auto loaded = oidd::refdetect::load_reference_set(*params_.refset);
      refs_ = std::make_unique<oidd::refdetect::ReferenceSet>(std::move(loaded.refs));
      params_.felz = loaded.felz_params;
      params_.center = loaded.center_params;
      params_.ssim = loaded.ssim_params;
    } else if (name_ != "bls") {
      throw oidd::Error(oidd::ErrorCode::kUnknownDetector, "unknown detector '" + name_ + "'");
    }
  }

  Json score(const fs::path& input) const {
    const oidd::RgbImage x = oidd::tensorio::read_image(input);
    Json out{{"detector", name_}, {"input", input.string()}};
    if (name_ == "ssim") {
      const auto r = oidd::refdetect::score_relevance(
          oidd::felzseg::n_r(x, params_.felz, params_.center), *refs_, params_.ssim, 0.0);
      out["score"] = r.score;
      out["nearest"] = r.nearest;
      return out;
    }
    if (name_ == "baseline") {
      out["score"] = oidd::odin::baseline_score(x, *clf_).value;
      return out;
    }
    if (name_ == "odin") {
      out["score"] = oidd::odin::odin_score(x, *clf_, params_.odin).value;
      return out;
    }
    const auto backend = segmentation_backend(input);
    out["score"] = name_ == "bls" ? oidd::segscore::bls(backend->segment(x)).value
                                  : oidd::segscore::ods(x, *clf_, *backend, params_.odin.zeta,
                                                        params_.odin.temperature).value;
    return out;
  }

 private:
  std::unique_ptr<oidd::segscore::SegmentationBackend> segmentation_backend(
      const fs::path& input) const {
    if (params_.segmenter == "toy") return std::make_unique<oidd::ToySegmentationBackend>(params_.toy);
    fs::path path = params_.segmap ? *params_.segmap : fs::path(input).replace_extension(".oidt");
    return std::make_unique<oidd::segscore::FileSegmentationBackend>(path, params_.num_classes());
  }

  std::string name_;
  Params params_;
  std::unique_ptr<oidd::odin::LinearClassifier> clf_;
  std::unique_ptr<oidd::refdetect::ReferenceSet> refs_;
};

// ---- subcommands --------------------------------------------------------

int cmd_synth(const std::string& spec_path, const fs::path& out) {
  oidd::eval::SynthSpec spec;
  if (!spec_path.empty()) spec = oidd::read_json_file(spec_path).get<oidd::eval::SynthSpec>();
  spec = spec.resolved();
  fs::create_directories(out);
  for (const auto& split : oidd::eval::generate_synthetic(spec)) {
    const fs::path dir = out / split.name;
    fs::create_directories(dir);
    Json items = Json::array();
    for (std::size_t i = 0; i < split.corpus.items.size(); ++i) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "%04zu", i);
      const auto& item = split.corpus.items[i];
      oidd::tensorio::write_image(dir / (std::string(stem) + ".ppm"), item.image);
      oidd::tensorio::write_binary_pgm(dir / (std::string(stem) + "_mask.pgm"), split.masks[i]);
      items.push_back({{"image", std::string(stem) + ".ppm"},
                       {"mask", std::string(stem) + "_mask.pgm"},
                       {"label", item.label},
                       {"tag", item.tag}});
    }
    write_text(dir / "labels.json", Json{{"split", split.name}, {"items", items}}.dump(2) + "\n");
  }
  Json spec_json = spec;
  write_text(out / "spec.json", spec_json.dump(2) + "\n");
  Params params;
  params.toy = oidd::eval::default_toy_segmenter(spec);
  write_text(out / "params.json", params_to_json(params).dump(2) + "\n");
  std::cout << Json{{"out", out.string()}, {"splits", 4}}.dump() << "\n";
  return kExitOk;
}

int cmd_segment(const std::string& method, const Params& p, const fs::path& input,
                const fs::path& out, const std::string& render) {
  if (method == "felz") {
    const auto map = oidd::felzseg::n_r(oidd::tensorio::read_image(input), p.felz, p.center);
    oidd::tensorio::write_tensor(out, oidd::tensorio::from_binary_map(map));
    if (!render.empty()) oidd::tensorio::write_binary_pgm(render, map);
    std::cout << Json{{"method", method}, {"foreground_pixels", map.count_ones()}}.dump() << "\n";
  } else if (method == "toy") {
    const auto map = oidd::toy_segment(oidd::tensorio::read_image(input), p.toy);
    oidd::tensorio::write_tensor(out, oidd::tensorio::from_segmap(map));
    std::cout << Json{{"method", method}, {"bls", oidd::segscore::bls(map).value}}.dump() << "\n";
  } else if (method == "file") {
    const auto t = oidd::tensorio::read_tensor(input);
    const auto map = oidd::tensorio::as_segmap(t, p.num_classes());
    oidd::tensorio::write_tensor(out, t);
    std::cout << Json{{"method", method}, {"bls", oidd::segscore::bls(map).value}}.dump() << "\n";
  } else {
    throw UsageError("--method must be felz, toy or file");
  }
  return kExitOk;
}

int cmd_refset_build(const Params& p, const fs::path& corpus_dir, std::uint64_t seed,
                     const fs::path& out) {
  const auto corpus = load_corpus(corpus_dir);
  std::vector<int> labels;
  for (const auto& item : corpus.items) {
    if (item.label >= 0) labels.push_back(item.label);
  }
  const auto refs = oidd::refdetect::build_reference_set(
      corpus, labels, oidd::refdetect::make_nr(p.felz, p.center), seed);
  oidd::refdetect::save_reference_set(out, refs, p.ssim, p.felz, p.center);
  std::cout << Json{{"out", out.string()}, {"entries", refs.entries.size()}, {"seed", seed}}.dump()
            << "\n";
  return kExitOk;
}

int cmd_train(const Params& p, const fs::path& corpus_dir, const fs::path& out) {
  const auto corpus = load_corpus(corpus_dir);
  std::vector<oidd::RgbImage> images;
  std::vector<int> labels;
  for (const auto& item : corpus.items) {
    if (item.label < 0) continue;
    images.push_back(item.image);
    labels.push_back(item.label);
  }
  const auto clf = oidd::odin::train_linear_classifier(images, labels, p.num_classes(), p.train);
  oidd::odin::write_classifier(out, clf);
  std::cout << Json{{"out", out.string()}, {"classes", clf.num_classes()}, {"dim", clf.dim()}}.dump()
            << "\n";
  return kExitOk;
}

int cmd_calibrate(const Detector& d, const fs::path& corpus_dir, double target_tpr) {
  std::vector<double> scores;
  for (const auto& e : read_corpus(corpus_dir)) scores.push_back(d.score(e.image)["score"].get<double>());
  const double eps = oidd::eval::calibrate_epsilon(scores, target_tpr);
  std::size_t accepted = 0;
  for (double s : scores) accepted += s >= eps ? 1 : 0;
  std::cout << Json{{"epsilon", eps},
                    {"tpr", static_cast<double>(accepted) / static_cast<double>(scores.size())},
                    {"n", scores.size()},
                    {"target_tpr", target_tpr}}.dump()
            << "\n";
  return kExitOk;
}

int cmd_detect(const Detector& d, double eps, const fs::path& input) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw UsageError("--epsilon must lie in [0, 1]");
  Json out = d.score(input);
  const int verdict = oidd::segscore::verdict(out["score"].get<double>(), eps);
  out["epsilon"] = eps;
  out["verdict"] = verdict;
  out["ood"] = verdict == 1;
  std::cout << out.dump() << "\n";
  return verdict == 1 ? kExitOod : kExitOk;
}

int cmd_eval(const std::string& config_path, const fs::path& out) {
  const auto config = oidd::eval::experiment_config_from_json(oidd::read_json_file(config_path));
  const auto result = oidd::eval::run_experiment(config);
  oidd::eval::write_experiment_outputs(out, result);
  Json summary = Json::array();
  for (const auto& r : result.reports) {
    summary.push_back({{"detector", r.detector}, {"split", r.split}, {"auroc", r.report.auroc},
                       {"tnr_at_95tpr", r.report.tnr_at_95tpr}});
  }
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

void print_error(const std::string& kind, const std::string& message,
                 std::optional<std::size_t> offset = std::nullopt) {
  Json err{{"error", kind}, {"message", message}};
  if (offset) err["offset"] = *offset;
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Out-of-intended-distribution detection"};
  app.require_subcommand(1);

  std::string params_path;
  std::string detector;
  std::string input;
  std::string out;

  auto* synth = app.add_subcommand("synth", "Write synthetic corpora");
  std::string spec_path;
  synth->add_option("--spec", spec_path, "SynthSpec JSON (defaults when omitted)")->check(CLI::ExistingFile);
  synth->add_option("--out", out, "Output directory")->required();

  auto* segment = app.add_subcommand("segment", "Segment one image");
  std::string method;
  std::string render;
  segment->add_option("--method", method, "felz | toy | file")->required();
  segment->add_option("--params", params_path, "Params JSON");
  segment->add_option("input", input, "Input PPM/PGM, or OIDT tensor for --method file")->required();
  segment->add_option("--out", out, "Output OIDT file")->required();
  segment->add_option("--render", render, "Also write the felz map as PGM");

  auto* refset = app.add_subcommand("refset", "Reference-set tools");
  refset->require_subcommand(1);
  auto* refset_build = refset->add_subcommand("build", "Build a reference set");
  std::string corpus_dir;
  std::uint64_t seed = 0;
  refset_build->add_option("--corpus", corpus_dir, "Corpus directory with labels.json")->required();
  refset_build->add_option("--seed", seed, "Sampling seed")->required();
  refset_build->add_option("--out", out, "Output directory")->required();
  refset_build->add_option("--params", params_path, "Params JSON");

  auto* train = app.add_subcommand("train", "Fit the linear classifier on a corpus");
  train->add_option("--corpus", corpus_dir, "Corpus directory with labels.json")->required();
  train->add_option("--out", out, "Output classifier OIDT file")->required();
  train->add_option("--params", params_path, "Params JSON");

  auto* score = app.add_subcommand("score", "Score one image");
  score->add_option("--detector", detector, "bls | ods | ssim | baseline | odin")->required();
  score->add_option("--params", params_path, "Params JSON");
  score->add_option("input", input, "Input image")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Choose epsilon at a target TPR");
  double target_tpr = 0.95;
  calibrate->add_option("--detector", detector, "Detector")->required();
  calibrate->add_option("--in-dist", corpus_dir, "In-distribution corpus directory")->required();
  calibrate->add_option("--target-tpr", target_tpr, "Target true positive rate");
  calibrate->add_option("--params", params_path, "Params JSON");

  auto* detect = app.add_subcommand("detect", "Threshold one image; exit 1 when OOD");
  double epsilon = 0.0;
  detect->add_option("--detector", detector, "Detector")->required();
  detect->add_option("--epsilon", epsilon, "Threshold")->required();
  detect->add_option("--params", params_path, "Params JSON");
  detect->add_option("input", input, "Input image")->required();

  auto* eval = app.add_subcommand("eval", "Run a synthetic experiment");
  std::string config_path;
  eval->add_option("--config", config_path, "Experiment config JSON")->required();
  eval->add_option("--out", out, "Report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("Usage", e.what());
    return kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(spec_path, out);
    if (*eval) return cmd_eval(config_path, out);
    const Params params = load_params(params_path);
    if (*segment) return cmd_segment(method, params, input, out, render);
    if (*refset_build) return cmd_refset_build(params, corpus_dir, seed, out);
    if (*train) return cmd_train(params, corpus_dir, out);
    const Detector d(detector, params);
    if (*score) {
      std::cout << d.score(input).dump() << "\n";
      return kExitOk;
    }
    if (*calibrate) return cmd_calibrate(d, corpus_dir, target_tpr);
    if (*detect) return cmd_detect(d, epsilon, input);
  } catch (const UsageError& e) {
    print_error("Usage", e.what());
    return kExitUsage;
  } catch (const oidd::Error& e) {
    print_error(std::string(oidd::to_string(e.code())), e.what(), e.offset());
    const bool usage = e.code() == oidd::ErrorCode::kInvalidArgument ||
                       e.code() == oidd::ErrorCode::kUnknownDetector;
    return usage ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return kExitData;
  }
  return kExitUsage;
}
