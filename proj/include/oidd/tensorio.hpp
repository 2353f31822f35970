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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "oidd/image.hpp"

namespace oidd::tensorio {

// OIDT record layout, all integers little-endian:
//   "OIDT" | version u8 = 1 | dtype u8 | ndim u8 | ndim x u32 dims | payload
enum class DType : std::uint8_t { kFloat32 = 0, kUInt8 = 1 };

inline constexpr std::array<char, 4> kMagic = {'O', 'I', 'D', 'T'};
inline constexpr std::uint8_t kVersion = 1;

std::size_t dtype_size(DType dtype) noexcept;

struct TensorFile {
  DType dtype = DType::kFloat32;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> payload;  // raw little-endian element bytes

  std::size_t num_elements() const noexcept;

  static TensorFile from_floats(std::vector<std::uint32_t> dims,
                                std::span<const float> values);
  static TensorFile from_bytes(std::vector<std::uint32_t> dims,
                               std::span<const std::uint8_t> values);

  // Element access independent of host byte order.
  std::vector<float> floats() const;

  bool operator==(const TensorFile&) const = default;
};

// Serialized record bytes.
std::vector<std::uint8_t> encode(const TensorFile& t);

// Decodes one record starting at `offset` and advances `offset` past it.
// Errors report the absolute byte offset of the failure.
TensorFile decode(std::span<const std::uint8_t> bytes, std::size_t& offset);

// Decodes exactly one record spanning all of `bytes`.
TensorFile decode(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

TensorFile read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const TensorFile& t);

// Binary PGM (P5) or PPM (P6), maxval 255. Gray rasters are replicated to
// three channels.
RgbImage read_image(const std::filesystem::path& path);
RgbImage decode_image(std::span<const std::uint8_t> bytes);
// Writes P6; channel values quantized as round(255 v).
void write_image(const std::filesystem::path& path, const RgbImage& image);
std::vector<std::uint8_t> encode_image(const RgbImage& image);

// Renders foreground as 255 and background as 0 in a P5 raster.
void write_binary_pgm(const std::filesystem::path& path, const BinaryMap& map);
BinaryMap read_binary_pgm(const std::filesystem::path& path);

SegMap as_segmap(const TensorFile& t, int num_classes);
TensorFile from_segmap(const SegMap& m);

BinaryMap as_binary_map(const TensorFile& t);
TensorFile from_binary_map(const BinaryMap& m);

}  // namespace oidd::tensorio
