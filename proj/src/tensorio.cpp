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

#include "oidd/tensorio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "oidd/error.hpp"

namespace oidd::tensorio {

namespace {

// Upper bound on decoded payload size; guards against hostile headers.
constexpr std::uint64_t kMaxPayloadBytes = std::uint64_t{1} << 40;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes[at + static_cast<std::size_t>(i)]} << (8 * i);
  return v;
}

void require(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t need,
             const char* what) {
  if (bytes.size() < offset || bytes.size() - offset < need) {
    throw Error(ErrorCode::kTruncatedPayload,
                std::string(what) + " needs " + std::to_string(need) + " bytes, " +
                    std::to_string(bytes.size() > offset ? bytes.size() - offset : 0) +
                    " available",
                bytes.size());
  }
}

}  // namespace

std::size_t dtype_size(DType dtype) noexcept {
  return dtype == DType::kFloat32 ? 4 : 1;
}

std::size_t TensorFile::num_elements() const noexcept {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

TensorFile TensorFile::from_floats(std::vector<std::uint32_t> dims,
                                   std::span<const float> values) {
  TensorFile t{DType::kFloat32, std::move(dims), {}};
  if (t.num_elements() != values.size()) {
    throw Error(ErrorCode::kShapeMismatch, "value count does not match dims");
  }
  t.payload.reserve(values.size() * 4);
  for (float f : values) put_u32(t.payload, std::bit_cast<std::uint32_t>(f));
  return t;
}

TensorFile TensorFile::from_bytes(std::vector<std::uint32_t> dims,
                                  std::span<const std::uint8_t> values) {
  TensorFile t{DType::kUInt8, std::move(dims), {values.begin(), values.end()}};
  if (t.num_elements() != values.size()) {
    throw Error(ErrorCode::kShapeMismatch, "value count does not match dims");
  }
  return t;
}

std::vector<float> TensorFile::floats() const {
  if (dtype != DType::kFloat32) {
    throw Error(ErrorCode::kBadDtype, "tensor is not float32");
  }
  std::vector<float> out(payload.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::bit_cast<float>(get_u32(payload, i * 4));
  }
  return out;
}

std::vector<std::uint8_t> encode(const TensorFile& t) {
  if (t.dims.empty() || t.dims.size() > 255) {
    throw Error(ErrorCode::kDimOverflow, "ndim must be in [1, 255]");
  }
  std::vector<std::uint8_t> out;
  out.reserve(7 + 4 * t.dims.size() + t.payload.size());
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(t.dtype));
  out.push_back(static_cast<std::uint8_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  out.insert(out.end(), t.payload.begin(), t.payload.end());
  return out;
}

TensorFile decode(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  const std::size_t start = offset;
  require(bytes, start, 7, "header");
  if (std::memcmp(bytes.data() + start, kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::kBadMagic, "expected \"OIDT\"", start);
  }
  if (bytes[start + 4] != kVersion) {
    throw Error(ErrorCode::kBadVersion,
                "unsupported version " + std::to_string(bytes[start + 4]), start + 4);
  }
  const std::uint8_t dtype_byte = bytes[start + 5];
  if (dtype_byte > 1) {
    throw Error(ErrorCode::kBadDtype, "unknown dtype " + std::to_string(dtype_byte),
                start + 5);
  }
  const auto dtype = static_cast<DType>(dtype_byte);
  const std::size_t ndim = bytes[start + 6];
  if (ndim == 0) {
    throw Error(ErrorCode::kDimOverflow, "ndim is 0", start + 6);
  }
  require(bytes, start + 7, 4 * ndim, "dims");

  TensorFile t{dtype, {}, {}};
  t.dims.reserve(ndim);
  std::uint64_t payload_bytes = dtype_size(dtype);
  for (std::size_t i = 0; i < ndim; ++i) {
    const std::size_t at = start + 7 + 4 * i;
    const std::uint32_t d = get_u32(bytes, at);
    if (d == 0) throw Error(ErrorCode::kDimOverflow, "dimension is 0", at);
    payload_bytes *= d;
    if (payload_bytes > kMaxPayloadBytes) {
      throw Error(ErrorCode::kDimOverflow, "payload size overflows", at);
    }
    t.dims.push_back(d);
  }
  const std::size_t payload_at = start + 7 + 4 * ndim;
  const auto need = static_cast<std::size_t>(payload_bytes);
  if (bytes.size() - payload_at < need) {
    throw Error(ErrorCode::kTruncatedPayload,
                "payload needs " + std::to_string(need) + " bytes from offset " +
                    std::to_string(payload_at) + ", " +
                    std::to_string(bytes.size() - payload_at) + " available",
                bytes.size());
  }
  t.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(payload_at),
                   bytes.begin() + static_cast<std::ptrdiff_t>(payload_at + need));
  offset = payload_at + need;
  return t;
}

TensorFile decode(std::span<const std::uint8_t> bytes) {
  std::size_t offset = 0;
  TensorFile t = decode(bytes, offset);
  if (offset != bytes.size()) {
    throw Error(ErrorCode::kTrailingBytes,
                std::to_string(bytes.size() - offset) + " bytes after record", offset);
  }
  return t;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

TensorFile read_tensor(const std::filesystem::path& path) {
  return decode(read_file_bytes(path));
}

void write_tensor(const std::filesystem::path& path, const TensorFile& t) {
  write_file_bytes(path, encode(t));
}

namespace {

struct PnmHeader {
  char kind = 0;  // '5' or '6'
  int width = 0;
  int height = 0;
  std::size_t raster_at = 0;
};

PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw Error(ErrorCode::kUnsupportedFormat, "expected binary PGM (P5) or PPM (P6)", 0);
  }
  PnmHeader h;
  h.kind = static_cast<char>(bytes[1]);
  std::size_t pos = 2;
  auto is_space = [](std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  };
  auto next_int = [&]() -> long long {
    for (;;) {
      while (pos < bytes.size() && is_space(bytes[pos])) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9') {
      throw Error(ErrorCode::kUnsupportedFormat, "malformed header", pos);
    }
    long long v = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      if (v > std::numeric_limits<int>::max()) {
        throw Error(ErrorCode::kUnsupportedFormat, "header value too large", pos);
      }
      ++pos;
    }
    return v;
  };
  h.width = static_cast<int>(next_int());
  h.height = static_cast<int>(next_int());
  const std::size_t maxval_at = pos;
  const long long maxval = next_int();
  if (maxval != 255) {
    throw Error(ErrorCode::kMaxvalNot255, "maxval is " + std::to_string(maxval), maxval_at);
  }
  if (h.width < 1 || h.height < 1) {
    throw Error(ErrorCode::kUnsupportedFormat, "empty raster", maxval_at);
  }
  if (pos >= bytes.size() || !is_space(bytes[pos])) {
    throw Error(ErrorCode::kUnsupportedFormat, "missing raster separator", pos);
  }
  h.raster_at = pos + 1;
  return h;
}

std::vector<std::uint8_t> pnm_bytes(char kind, int width, int height,
                                    std::span<const std::uint8_t> raster) {
  const std::string header = std::string("P") + kind + "\n" + std::to_string(width) + " " +
                             std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
  const PnmHeader h = parse_pnm_header(bytes);
  const std::size_t channels = h.kind == '6' ? 3 : 1;
  const std::size_t pixels = static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height);
  if (bytes.size() - h.raster_at < pixels * channels) {
    throw Error(ErrorCode::kTruncatedPayload, "raster shorter than width*height", bytes.size());
  }
  std::vector<double> data(pixels * 3);
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::uint8_t u = bytes[h.raster_at + p * channels + (channels == 3 ? c : 0)];
      data[p * 3 + c] = u / 255.0;
    }
  }
  return RgbImage(h.height, h.width, std::move(data));
}

RgbImage read_image(const std::filesystem::path& path) {
  return decode_image(read_file_bytes(path));
}

std::vector<std::uint8_t> encode_image(const RgbImage& image) {
  std::vector<std::uint8_t> raster;
  raster.reserve(image.size());
  for (double v : image.data()) raster.push_back(quantize(v));
  return pnm_bytes('6', image.width(), image.height(), raster);
}

void write_image(const std::filesystem::path& path, const RgbImage& image) {
  write_file_bytes(path, encode_image(image));
}

void write_binary_pgm(const std::filesystem::path& path, const BinaryMap& map) {
  std::vector<std::uint8_t> raster;
  raster.reserve(map.data().size());
  for (auto v : map.data()) raster.push_back(v ? 255 : 0);
  write_file_bytes(path, pnm_bytes('5', map.width(), map.height(), raster));
}

BinaryMap read_binary_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const PnmHeader h = parse_pnm_header(bytes);
  if (h.kind != '5') throw Error(ErrorCode::kUnsupportedFormat, "mask must be P5", 1);
  const std::size_t pixels = static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height);
  if (bytes.size() - h.raster_at < pixels) {
    throw Error(ErrorCode::kTruncatedPayload, "raster shorter than width*height", bytes.size());
  }
  std::vector<std::uint8_t> data(pixels);
  for (std::size_t p = 0; p < pixels; ++p) data[p] = bytes[h.raster_at + p] >= 128 ? 1 : 0;
  return BinaryMap(h.height, h.width, std::move(data));
}

SegMap as_segmap(const TensorFile& t, int num_classes) {
  if (t.dims.size() != 3 || num_classes < 1 ||
      t.dims[2] != static_cast<std::uint32_t>(num_classes) + 1) {
    std::string shape;
    for (auto d : t.dims) shape += (shape.empty() ? "" : "x") + std::to_string(d);
    throw Error(ErrorCode::kShapeMismatch,
                "expected h x w x " + std::to_string(num_classes + 1) + ", got " + shape);
  }
  if (t.dtype != DType::kFloat32) {
    throw Error(ErrorCode::kBadDtype, "segmentation tensors must be float32");
  }
  const auto floats = t.floats();
  return SegMap(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), num_classes,
                std::vector<double>(floats.begin(), floats.end()));
}

TensorFile from_segmap(const SegMap& m) {
  std::vector<float> values(m.data().begin(), m.data().end());
  return TensorFile::from_floats({static_cast<std::uint32_t>(m.height()),
                                  static_cast<std::uint32_t>(m.width()),
                                  static_cast<std::uint32_t>(m.depth())},
                                 values);
}

BinaryMap as_binary_map(const TensorFile& t) {
  if (t.dtype != DType::kUInt8 || t.dims.size() != 2) {
    throw Error(ErrorCode::kShapeMismatch, "binary maps are 2-d uint8 tensors");
  }
  return BinaryMap(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), t.payload);
}

TensorFile from_binary_map(const BinaryMap& m) {
  return TensorFile::from_bytes(
      {static_cast<std::uint32_t>(m.height()), static_cast<std::uint32_t>(m.width())}, m.data());
}

}  // namespace oidd::tensorio
