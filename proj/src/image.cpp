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

#include "oidd/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oidd/error.hpp"

namespace oidd {

namespace {

void check_extent(int height, int width, std::size_t actual, std::size_t per_pixel,
                  const char* what) {
  if (height < 1 || width < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " needs height >= 1 and width >= 1");
  }
  const auto expected = static_cast<std::size_t>(height) *
                        static_cast<std::size_t>(width) * per_pixel;
  if (actual != expected) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + " data length " + std::to_string(actual) +
                    " != " + std::to_string(expected));
  }
}

}  // namespace

RgbImage::RgbImage(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_extent(height_, width_, data_.size(), 3, "RgbImage");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double v = data_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "RgbImage channel value " + std::to_string(v) +
                      " outside [0,1] at flat index " + std::to_string(i));
    }
  }
}

RgbImage RgbImage::filled(int height, int width, double r, double g, double b) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * 3);
  for (int i = 0; i < height * width; ++i) {
    data.push_back(r);
    data.push_back(g);
    data.push_back(b);
  }
  return RgbImage(height, width, std::move(data));
}

SegMap::SegMap(int height, int width, int num_classes, std::vector<double> data)
    : height_(height), width_(width), num_classes_(num_classes), data_(std::move(data)) {
  if (num_classes_ < 1) {
    throw Error(ErrorCode::kInvalidArgument, "SegMap needs num_classes >= 1");
  }
  check_extent(height_, width_, data_.size(), static_cast<std::size_t>(depth()),
               "SegMap");

  // Track the pixel whose vector deviates most from the simplex.
  double worst_dev = 0.0;
  double worst_sum = 1.0;
  int worst_row = -1;
  int worst_col = -1;
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      double sum = 0.0;
      double dev = 0.0;
      for (double p : pixel(r, c)) {
        if (!std::isfinite(p)) {
          dev = INFINITY;
        } else {
          dev = std::max({dev, -p, p - 1.0});
        }
        sum += p;
      }
      dev = std::max(dev, std::abs(sum - 1.0));
      if (dev > worst_dev) {
        worst_dev = dev;
        worst_sum = sum;
        worst_row = r;
        worst_col = c;
      }
    }
  }
  if (worst_dev > kSimplexTolerance) {
    throw Error(ErrorCode::kSimplexViolation,
                "pixel (" + std::to_string(worst_row) + ", " + std::to_string(worst_col) +
                    ") sums to " + std::to_string(worst_sum) +
                    " or leaves [0,1] by more than 1e-5");
  }
}

BinaryMap::BinaryMap(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_extent(height_, width_, data_.size(), 1, "BinaryMap");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (data_[i] > 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "BinaryMap value " + std::to_string(data_[i]) + " at flat index " +
                      std::to_string(i) + " is not 0 or 1");
    }
  }
}

BinaryMap BinaryMap::zeros(int height, int width) {
  return BinaryMap(height, width,
                   std::vector<std::uint8_t>(static_cast<std::size_t>(height) *
                                             static_cast<std::size_t>(width), 0));
}

std::size_t BinaryMap::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), 1));
}

GrayMap GrayMap::from(const BinaryMap& map) {
  GrayMap out{map.height(), map.width(), {}};
  out.data.assign(map.data().begin(), map.data().end());
  return out;
}

}  // namespace oidd
