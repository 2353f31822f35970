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

#include "oidd/refdetect.hpp"

#include <algorithm>
#include <set>

#include "oidd/config.hpp"
#include "oidd/error.hpp"
#include "oidd/rng.hpp"
#include "oidd/segscore.hpp"
#include "oidd/tensorio.hpp"

namespace oidd::refdetect {

RelevanceFn make_nr(const felzseg::FelzParams& p, const felzseg::CenterParams& c) {
  return [p, c](const RgbImage& x) { return felzseg::n_r(x, p, c); };
}

ReferenceSet build_reference_set(const LabeledCorpus& corpus, const std::vector<int>& labels,
                                 const RelevanceFn& relevance, std::uint64_t seed) {
  const std::set<int> ordered(labels.begin(), labels.end());
  Rng rng(seed);
  ReferenceSet out;
  out.seed = seed;
  for (int label : ordered) {
    std::vector<const LabeledItem*> members;
    for (const auto& item : corpus.items) {
      if (item.label == label) members.push_back(&item);
    }
    if (members.empty()) {
      throw Error(ErrorCode::kEmptyClass, "no corpus items for label " + std::to_string(label));
    }
    const auto pick = uniform_index(rng, members.size());
    out.entries.push_back({label, relevance(members[pick]->image)});
  }
  for (const auto& e : out.entries) {
    if (e.map.height() != out.entries.front().map.height() ||
        e.map.width() != out.entries.front().map.width()) {
      throw Error(ErrorCode::kShapeMismatch, "reference maps differ in size");
    }
  }
  return out;
}

ReferenceDetection score_relevance(const BinaryMap& relevance, const ReferenceSet& refs,
                           const ssim::SsimParams& p, double eps) {
  if (refs.entries.empty()) throw Error(ErrorCode::kInvalidArgument, "empty reference set");
  ReferenceDetection result;
  result.score = -1.0;
  for (const auto& entry : refs.entries) {
    if (entry.map.height() != relevance.height() || entry.map.width() != relevance.width()) {
      throw Error(ErrorCode::kShapeMismatch, "relevance map shape differs from reference " +
                                                 std::to_string(entry.label));
    }
    const double v = ssim::ssim(entry.map, relevance, p);
    if (v > result.score || (v == result.score && entry.label < result.nearest)) {
      result.score = v;
      result.nearest = entry.label;
    }
  }
  result.verdict = segscore::verdict(result.score, eps);
  return result;
}

ReferenceDetection detect_alg3(const RgbImage& t, const RelevanceFn& relevance,
                       const ReferenceSet& refs, const ssim::SsimParams& p, double eps) {
  return score_relevance(relevance(t), refs, p, eps);
}

void save_reference_set(const std::filesystem::path& dir, const ReferenceSet& refs,
                        const ssim::SsimParams& sp, const felzseg::FelzParams& fp,
                        const felzseg::CenterParams& cp) {
  std::filesystem::create_directories(dir);
  Json params{{"ssim_params", sp}, {"felz_params", fp}, {"center_params", cp}};
  Json manifest = params;
  manifest["seed"] = refs.seed;
  manifest["params_hash"] = fnv1a_hex(params.dump());
  manifest["entries"] = Json::array();
  for (const auto& e : refs.entries) {
    const std::string name = "ref_" + std::to_string(e.label) + ".oidt";
    tensorio::write_tensor(dir / name, tensorio::from_binary_map(e.map));
    manifest["entries"].push_back({{"label", e.label}, {"path", name}});
  }
  const std::string text = manifest.dump(2) + "\n";
  tensorio::write_file_bytes(dir / "manifest.json",
                             std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

LoadedReferenceSet load_reference_set(const std::filesystem::path& dir) {
  const Json manifest = read_json_file((dir / "manifest.json").string());
  LoadedReferenceSet out;
  try {
    out.refs.seed = manifest.at("seed").get<std::uint64_t>();
    if (manifest.contains("ssim_params")) out.ssim_params = manifest["ssim_params"].get<ssim::SsimParams>();
    if (manifest.contains("felz_params")) out.felz_params = manifest["felz_params"].get<felzseg::FelzParams>();
    if (manifest.contains("center_params")) {
      out.center_params = manifest["center_params"].get<felzseg::CenterParams>();
    }
    std::set<int> seen;
    for (const auto& e : manifest.at("entries")) {
      const int label = e.at("label").get<int>();
      if (!seen.insert(label).second) {
        throw Error(ErrorCode::kInvalidConfig, "duplicate reference label " + std::to_string(label));
      }
      out.refs.entries.push_back(
          {label, tensorio::as_binary_map(tensorio::read_tensor(dir / e.at("path").get<std::string>()))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, "reference manifest: " + std::string(e.what()));
  }
  std::sort(out.refs.entries.begin(), out.refs.entries.end(),
            [](const ReferenceEntry& a, const ReferenceEntry& b) { return a.label < b.label; });
  return out;
}

}  // namespace oidd::refdetect
