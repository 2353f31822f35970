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

#include "oidd/config.hpp"

#include <cstdio>

#include "oidd/error.hpp"
#include "oidd/tensorio.hpp"

namespace oidd {

namespace {

template <typename T>
void get_if(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("key \"") + key + "\": " + e.what());
  }
}

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, std::string(what) + " must be a JSON object");
  }
}

}  // namespace

namespace ssim {
void to_json(Json& j, const SsimParams& p) {
  j = Json{{"window", p.window}, {"k1", p.k1}, {"k2", p.k2}, {"dynamic_range", p.dynamic_range}};
}
void from_json(const Json& j, SsimParams& p) {
  require_object(j, "ssim params");
  get_if(j, "window", p.window);
  get_if(j, "k1", p.k1);
  get_if(j, "k2", p.k2);
  get_if(j, "dynamic_range", p.dynamic_range);
}
}  // namespace ssim

namespace felzseg {
void to_json(Json& j, const FelzParams& p) {
  j = Json{{"k", p.k}, {"min_size", p.min_size}, {"smoothing_sigma", p.smoothing_sigma}};
}
void from_json(const Json& j, FelzParams& p) {
  require_object(j, "felz params");
  get_if(j, "k", p.k);
  get_if(j, "min_size", p.min_size);
  get_if(j, "smoothing_sigma", p.smoothing_sigma);
}
void to_json(Json& j, const CenterParams& p) {
  j = Json{{"rho", p.rho}, {"drop_border_touching", p.drop_border_touching}};
}
void from_json(const Json& j, CenterParams& p) {
  require_object(j, "center params");
  get_if(j, "rho", p.rho);
  get_if(j, "drop_border_touching", p.drop_border_touching);
}
}  // namespace felzseg

namespace odin {
void to_json(Json& j, const OdinParams& p) {
  j = Json{{"zeta", p.zeta}, {"temperature", p.temperature}};
}
void from_json(const Json& j, OdinParams& p) {
  require_object(j, "odin params");
  get_if(j, "zeta", p.zeta);
  get_if(j, "temperature", p.temperature);
}
void to_json(Json& j, const TrainParams& p) {
  j = Json{{"epochs", p.epochs}, {"learning_rate", p.learning_rate}, {"l2", p.l2}};
}
void from_json(const Json& j, TrainParams& p) {
  require_object(j, "train params");
  get_if(j, "epochs", p.epochs);
  get_if(j, "learning_rate", p.learning_rate);
  get_if(j, "l2", p.l2);
}
}  // namespace odin

void to_json(Json& j, const ToySegmenter& s) {
  j = Json{{"prototypes", s.prototypes},
           {"sharpness", s.sharpness},
           {"background_distance", s.background_distance}};
}
void from_json(const Json& j, ToySegmenter& s) {
  require_object(j, "toy segmenter");
  get_if(j, "prototypes", s.prototypes);
  get_if(j, "sharpness", s.sharpness);
  get_if(j, "background_distance", s.background_distance);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, origin + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  const auto bytes = tensorio::read_file_bytes(path);
  return parse_json(std::string(bytes.begin(), bytes.end()), path);
}

}  // namespace oidd
