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

#include "oidd/ssim.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oidd/error.hpp"

namespace oidd::ssim {

namespace {

// (h+1) x (w+1) summed-area table of f(a, b) per pixel.
template <typename F>
std::vector<double> integral(const GrayMap& a, const GrayMap& b, F f) {
  const auto w1 = static_cast<std::size_t>(a.width) + 1;
  std::vector<double> table(w1 * (static_cast<std::size_t>(a.height) + 1), 0.0);
  for (int r = 0; r < a.height; ++r) {
    double row = 0.0;
    for (int c = 0; c < a.width; ++c) {
      row += f(a.at(r, c), b.at(r, c));
      table[(static_cast<std::size_t>(r) + 1) * w1 + static_cast<std::size_t>(c) + 1] =
          table[static_cast<std::size_t>(r) * w1 + static_cast<std::size_t>(c) + 1] + row;
    }
  }
  return table;
}

double box_sum(const std::vector<double>& table, std::size_t w1, int r, int c, int win) {
  const auto r0 = static_cast<std::size_t>(r);
  const auto c0 = static_cast<std::size_t>(c);
  const auto r1 = r0 + static_cast<std::size_t>(win);
  const auto c1 = c0 + static_cast<std::size_t>(win);
  return table[r1 * w1 + c1] - table[r0 * w1 + c1] - table[r1 * w1 + c0] + table[r0 * w1 + c0];
}

}  // namespace

void SsimParams::validate() const {
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "SSIM window must be odd and >= 3");
  }
  if (!(k1 > 0.0) || !(k2 > 0.0) || !(dynamic_range > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "SSIM k1, k2 and L must be positive");
  }
}

double ssim(const GrayMap& a, const GrayMap& b, const SsimParams& p) {
  p.validate();
  if (a.height != b.height || a.width != b.width) {
    throw Error(ErrorCode::kShapeMismatch,
                "SSIM inputs differ: " + std::to_string(a.height) + "x" + std::to_string(a.width) +
                    " vs " + std::to_string(b.height) + "x" + std::to_string(b.width));
  }
  if (a.height < p.window || a.width < p.window) {
    throw Error(ErrorCode::kWindowTooLarge,
                "window " + std::to_string(p.window) + " exceeds map " + std::to_string(a.height) +
                    "x" + std::to_string(a.width));
  }

  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  const auto w1 = static_cast<std::size_t>(a.width) + 1;
  const auto sum_a = integral(a, b, [](double x, double) { return x; });
  const auto sum_b = integral(a, b, [](double, double y) { return y; });
  const auto sum_aa = integral(a, b, [](double x, double) { return x * x; });
  const auto sum_bb = integral(a, b, [](double, double y) { return y * y; });
  const auto sum_ab = integral(a, b, [](double x, double y) { return x * y; });
  const double inv_n = 1.0 / static_cast<double>(p.window * p.window);

  double total = 0.0;
  double compensation = 0.0;
  std::size_t windows = 0;
  for (int r = 0; r + p.window <= a.height; ++r) {
    for (int c = 0; c + p.window <= a.width; ++c) {
      const double mu_a = box_sum(sum_a, w1, r, c, p.window) * inv_n;
      const double mu_b = box_sum(sum_b, w1, r, c, p.window) * inv_n;
      const double var_a = box_sum(sum_aa, w1, r, c, p.window) * inv_n - mu_a * mu_a;
      const double var_b = box_sum(sum_bb, w1, r, c, p.window) * inv_n - mu_b * mu_b;
      const double cov = box_sum(sum_ab, w1, r, c, p.window) * inv_n - mu_a * mu_b;
      const double s1 = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
      const double s2 = (2.0 * cov + c2) / (var_a + var_b + c2);
      const double value = std::max(0.0, s1 * s2);

      // Neumaier summation.
      const double t = total + value;
      if (std::abs(total) >= std::abs(value)) {
        compensation += (total - t) + value;
      } else {
        compensation += (value - t) + total;
      }
      total = t;
      ++windows;
    }
  }
  return (total + compensation) / static_cast<double>(windows);
}

double ssim(const BinaryMap& a, const BinaryMap& b, const SsimParams& p) {
  return ssim(GrayMap::from(a), GrayMap::from(b), p);
}

}  // namespace oidd::ssim
