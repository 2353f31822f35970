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

#include <cstdint>
#include <span>
#include <vector>

namespace oidd {

// h x w x 3 image, row-major, channel values in [0, 1].
class RgbImage {
 public:
  RgbImage(int height, int width, std::vector<double> data);

  static RgbImage filled(int height, int width, double r, double g, double b);
  static RgbImage filled(int height, int width, double gray) {
    return filled(height, width, gray, gray, gray);
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> pixel(int row, int col) const noexcept {
    return std::span<const double>(data_).subspan(index(row, col), 3);
  }
  double at(int row, int col, int channel) const noexcept {
    return data_[index(row, col) + static_cast<std::size_t>(channel)];
  }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(col)) * 3;
  }

  int height_;
  int width_;
  std::vector<double> data_;
};

// Per-pixel class probabilities, h x w x (N + 1). Index N is background.
class SegMap {
 public:
  static constexpr double kSimplexTolerance = 1e-5;

  // Throws SimplexViolation naming the worst pixel when any per-pixel vector
  // leaves [0,1] or does not sum to one within kSimplexTolerance.
  SegMap(int height, int width, int num_classes, std::vector<double> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int num_classes() const noexcept { return num_classes_; }
  int depth() const noexcept { return num_classes_ + 1; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> pixel(int row, int col) const noexcept {
    const auto d = static_cast<std::size_t>(depth());
    return std::span<const double>(data_).subspan(
        (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
         static_cast<std::size_t>(col)) * d, d);
  }

 private:
  int height_;
  int width_;
  int num_classes_;
  std::vector<double> data_;
};

// h x w map of {0, 1}; 1 marks semantically relevant pixels.
class BinaryMap {
 public:
  BinaryMap(int height, int width, std::vector<std::uint8_t> data);

  static BinaryMap zeros(int height, int width);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::uint8_t at(int row, int col) const noexcept {
    return data_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(col)];
  }
  std::size_t count_ones() const noexcept;

  bool operator==(const BinaryMap&) const = default;

 private:
  int height_;
  int width_;
  std::vector<std::uint8_t> data_;
};

// Single-channel real map; the common input type of SSIM.
struct GrayMap {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  static GrayMap from(const BinaryMap& map);
  double at(int row, int col) const noexcept {
    return data[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(col)];
  }
};

}  // namespace oidd
