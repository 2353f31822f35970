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

// JSON bindings for parameter structs shared by the CLI, the reference-set
// manifest and experiment configs. Missing keys keep their defaults.

#include <cstdint>
#include <string>

#include "json.hpp"
#include "oidd/felzseg.hpp"
#include "oidd/odinprep.hpp"
#include "oidd/ssim.hpp"
#include "oidd/toyseg.hpp"

namespace oidd {

using Json = nlohmann::json;

namespace ssim {
void to_json(Json& j, const SsimParams& p);
void from_json(const Json& j, SsimParams& p);
}  // namespace ssim

namespace felzseg {
void to_json(Json& j, const FelzParams& p);
void from_json(const Json& j, FelzParams& p);
void to_json(Json& j, const CenterParams& p);
void from_json(const Json& j, CenterParams& p);
}  // namespace felzseg

namespace odin {
void to_json(Json& j, const OdinParams& p);
void from_json(const Json& j, OdinParams& p);
void to_json(Json& j, const TrainParams& p);
void from_json(const Json& j, TrainParams& p);
}  // namespace odin

void to_json(Json& j, const ToySegmenter& s);
void from_json(const Json& j, ToySegmenter& s);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

// Parses JSON text; failures become InvalidConfig.
Json parse_json(const std::string& text, const std::string& origin);
Json read_json_file(const std::string& path);

}  // namespace oidd
