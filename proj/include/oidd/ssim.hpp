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

#include "oidd/image.hpp"

namespace oidd::ssim {

struct SsimParams {
  int window = 7;  // odd, >= 3
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  void validate() const;
};

// Mean over all valid box windows (stride 1) of max(0, S1 * S2), where
//   S1 = (2 mu_a mu_b + C1) / (mu_a^2 + mu_b^2 + C1),  C1 = (k1 L)^2
//   S2 = (2 cov_ab + C2) / (var_a + var_b + C2),       C2 = (k2 L)^2
// with population moments. Window order is row-major and the mean uses
// compensated summation.
double ssim(const GrayMap& a, const GrayMap& b, const SsimParams& p = {});
double ssim(const BinaryMap& a, const BinaryMap& b, const SsimParams& p = {});

}  // namespace oidd::ssim
