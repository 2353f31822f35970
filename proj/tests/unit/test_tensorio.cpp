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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oidd/error.hpp"
#include "oidd/tensorio.hpp"

namespace fs = std::filesystem;
using namespace oidd;
using namespace oidd::tensorio;

namespace {

const fs::path kFixtures = OIDD_FIXTURES_DIR;

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "oidd_unit";
  fs::create_directories(dir);
  return dir / name;
}

template <typename F>
Error capture(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected oidd::Error";
  return Error(ErrorCode::kIo, "none");
}

}  // namespace

TEST(TensorIo, FloatTensorRoundTripsByteIdentically) {
  std::vector<float> values(36);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = 0.25f * static_cast<float>(i) - 3.0f;
  const auto t = TensorFile::from_floats({3, 3, 4}, values);
  const auto path = temp_path("rt.oidt");
  write_tensor(path, t);
  const auto back = read_tensor(path);
  EXPECT_EQ(back, t);
  EXPECT_EQ(back.payload, t.payload);
  EXPECT_EQ(back.floats(), values);
  EXPECT_EQ(read_file_bytes(path), encode(t));
}

TEST(TensorIo, HeaderLayoutIsLittleEndian) {
  const auto bytes = encode(TensorFile::from_bytes({2, 258}, std::vector<std::uint8_t>(516, 1)));
  ASSERT_GE(bytes.size(), 15u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "OIDT");
  EXPECT_EQ(bytes[4], 1);  // version
  EXPECT_EQ(bytes[5], 1);  // dtype u8
  EXPECT_EQ(bytes[6], 2);  // ndim
  EXPECT_EQ(bytes[7], 2);
  EXPECT_EQ(bytes[11], 2);  // 258 = 0x0102
  EXPECT_EQ(bytes[12], 1);
  EXPECT_EQ(bytes.size(), 7u + 8u + 516u);
}

TEST(TensorIo, RandomShapesRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int ndim = 1 + static_cast<int>(rng() % 4);
    std::vector<std::uint32_t> dims;
    std::size_t n = 1;
    for (int d = 0; d < ndim; ++d) {
      dims.push_back(1 + static_cast<std::uint32_t>(rng() % 5));
      n *= dims.back();
    }
    TensorFile t;
    if (rng() % 2) {
      std::vector<float> v(n);
      for (auto& x : v) x = static_cast<float>(static_cast<double>(rng() % 100000) / 7.0 - 5000.0);
      t = TensorFile::from_floats(dims, v);
    } else {
      std::vector<std::uint8_t> v(n);
      for (auto& x : v) x = static_cast<std::uint8_t>(rng());
      t = TensorFile::from_bytes(dims, v);
    }
    const auto bytes = encode(t);
    EXPECT_EQ(encode(decode(bytes)), bytes);
  }
}

TEST(TensorIo, ConcatenatedRecordsDecodeSequentially) {
  auto bytes = encode(TensorFile::from_floats({2}, std::vector<float>{1.0f, 2.0f}));
  const auto second = encode(TensorFile::from_bytes({1}, std::vector<std::uint8_t>{7}));
  bytes.insert(bytes.end(), second.begin(), second.end());
  std::size_t offset = 0;
  EXPECT_EQ(decode(bytes, offset).dims, std::vector<std::uint32_t>{2});
  EXPECT_EQ(decode(bytes, offset).payload, std::vector<std::uint8_t>{7});
  EXPECT_EQ(offset, bytes.size());
  EXPECT_EQ(capture([&] { decode(bytes); }).code(), ErrorCode::kTrailingBytes);
}

TEST(TensorIo, BadMagicReportsOffsetZero) {
  const auto e = capture([] { read_tensor(kFixtures / "bad_magic.oidt"); });
  EXPECT_EQ(e.code(), ErrorCode::kBadMagic);
  EXPECT_EQ(e.offset(), 0u);
}

TEST(TensorIo, BadVersionReportsVersionByte) {
  const auto e = capture([] { read_tensor(kFixtures / "bad_version.oidt"); });
  EXPECT_EQ(e.code(), ErrorCode::kBadVersion);
  EXPECT_EQ(e.offset(), 4u);
}

TEST(TensorIo, TruncatedPayloadNeeds64Bytes) {
  // 2 * 2 * 4 elements * 4 bytes = 64; the fixture carries 60.
  const auto e = capture([] { read_tensor(kFixtures / "truncated_payload.oidt"); });
  EXPECT_EQ(e.code(), ErrorCode::kTruncatedPayload);
  EXPECT_NE(std::string(e.what()).find("64"), std::string::npos);
  EXPECT_EQ(e.offset(), 7u + 12u + 60u);
}

TEST(TensorIo, ZeroDimIsRejectedAtItsOffset) {
  const auto e = capture([] { read_tensor(kFixtures / "zero_dim.oidt"); });
  EXPECT_EQ(e.code(), ErrorCode::kDimOverflow);
  EXPECT_EQ(e.offset(), 11u);
}

TEST(TensorIo, HugeDimsOverflow) {
  std::vector<std::uint8_t> bytes{'O', 'I', 'D', 'T', 1, 0, 3};
  for (int d = 0; d < 3; ++d) {
    for (int b = 0; b < 4; ++b) bytes.push_back(0xff);
  }
  EXPECT_EQ(capture([&] { decode(bytes); }).code(), ErrorCode::kDimOverflow);
}

TEST(TensorIo, ShortHeaderIsTruncated) {
  const std::vector<std::uint8_t> bytes{'O', 'I', 'D'};
  EXPECT_EQ(capture([&] { decode(bytes); }).code(), ErrorCode::kTruncatedPayload);
}

TEST(TensorIo, ReadsP6Scaled) {
  const auto img = read_image(kFixtures / "p6_2x1.ppm");
  ASSERT_EQ(img.height(), 1);
  ASSERT_EQ(img.width(), 2);
  EXPECT_EQ(std::vector<double>(img.data().begin(), img.data().end()),
            (std::vector<double>{1, 0, 0, 0, 0, 0}));
}

TEST(TensorIo, ReadsP5ReplicatedWithComment) {
  const auto img = read_image(kFixtures / "p5_1x1.pgm");
  for (int ch = 0; ch < 3; ++ch) EXPECT_DOUBLE_EQ(img.at(0, 0, ch), 128.0 / 255.0);
}

TEST(TensorIo, RejectsWideMaxvalAndAsciiRasters) {
  EXPECT_EQ(capture([] { read_image(kFixtures / "p6_maxval16.ppm"); }).code(),
            ErrorCode::kMaxvalNot255);
  EXPECT_EQ(capture([] { read_image(kFixtures / "p3_ascii.ppm"); }).code(),
            ErrorCode::kUnsupportedFormat);
}

TEST(TensorIo, ImageRoundTripOnQuantizedValues) {
  std::mt19937_64 rng(5);
  std::vector<double> data(5 * 7 * 3);
  for (auto& v : data) v = static_cast<double>(rng() % 256) / 255.0;
  const RgbImage img(5, 7, data);
  const auto path = temp_path("rt.ppm");
  write_image(path, img);
  EXPECT_EQ(read_image(path), img);
}

TEST(TensorIo, AsSegmapAcceptsValidSimplex) {
  std::vector<float> v;
  for (int p = 0; p < 4; ++p) v.insert(v.end(), {0.2f, 0.3f, 0.5f});
  const auto m = as_segmap(TensorFile::from_floats({2, 2, 3}, v), 2);
  EXPECT_EQ(m.num_classes(), 2);
  EXPECT_EQ(m.height(), 2);
}

TEST(TensorIo, AsSegmapReportsSimplexViolation) {
  std::vector<float> v;
  for (int p = 0; p < 4; ++p) v.insert(v.end(), {0.2f, 0.3f, 0.5f});
  v[9] = v[10] = v[11] = 0.5f;  // pixel (1, 1) sums to 1.5
  const auto e = capture([&] { as_segmap(TensorFile::from_floats({2, 2, 3}, v), 2); });
  EXPECT_EQ(e.code(), ErrorCode::kSimplexViolation);
  EXPECT_NE(std::string(e.what()).find("(1, 1)"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("1.5"), std::string::npos);
}

TEST(TensorIo, AsSegmapShapeMismatch) {
  const auto t = TensorFile::from_floats({2, 2, 4}, std::vector<float>(16, 0.25f));
  EXPECT_EQ(capture([&] { as_segmap(t, 2); }).code(), ErrorCode::kShapeMismatch);
}

TEST(TensorIo, AsSegmapNeverAcceptsOffSimplexVectors) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<float> v(3);
    for (auto& x : v) x = static_cast<float>(static_cast<double>(rng() % 1000) / 1000.0);
    const double sum = static_cast<double>(v[0]) + v[1] + v[2];
    const auto t = TensorFile::from_floats({1, 1, 3}, v);
    if (std::abs(sum - 1.0) > 1e-5) {
      EXPECT_THROW(as_segmap(t, 2), Error);
    }
  }
}

TEST(TensorIo, BinaryMapFixtureAndPgmRender) {
  const auto m = as_binary_map(read_tensor(kFixtures / "binary_map_3x2.oidt"));
  EXPECT_EQ(m.height(), 3);
  EXPECT_EQ(m.count_ones(), 4u);
  const auto path = temp_path("mask.pgm");
  write_binary_pgm(path, m);
  EXPECT_EQ(read_binary_pgm(path), m);
  const auto raw = read_image(path);
  EXPECT_EQ(raw.at(0, 1, 0), 1.0);
  EXPECT_EQ(raw.at(0, 0, 0), 0.0);
}
