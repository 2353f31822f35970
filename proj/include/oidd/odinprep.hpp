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

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "oidd/image.hpp"

namespace oidd {

enum class ScoreKind { kBls, kOds, kSsimMax, kBaseline, kOdin };

std::string_view to_string(ScoreKind kind);

// A detection score in [0, 1]; higher means more in-distribution.
struct DetectionScore {
  double value = 0.0;
  ScoreKind kind = ScoreKind::kBls;
};

}  // namespace oidd

namespace oidd::odin {

// Multinomial-logistic classifier over flattened h*w*3 images:
// logits = W x + b, W is N x d row-major.
class LinearClassifier {
 public:
  LinearClassifier(int num_classes, std::size_t dim, std::vector<double> weights,
                   std::vector<double> bias);

  int num_classes() const noexcept { return num_classes_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> bias() const noexcept { return bias_; }
  std::span<const double> row(int cls) const noexcept {
    return std::span<const double>(weights_).subspan(static_cast<std::size_t>(cls) * dim_, dim_);
  }

  std::vector<double> logits(std::span<const double> x) const;
  std::vector<double> logits(const RgbImage& x) const { return logits(x.data()); }

 private:
  int num_classes_;
  std::size_t dim_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

struct OdinParams {
  double zeta = 0.0014;         // perturbation magnitude, >= 0
  double temperature = 1000.0;  // > 0
};

// Temperature-scaled softmax with max subtraction. Throws NonFiniteLogit.
std::vector<double> softmax_t(std::span<const double> logits, double temperature);

// Gradient of log max_i softmax_t(f(x))_i with respect to x:
// (1/T) (w_c - sum_j p_j w_j), c the lowest index attaining the max.
std::vector<double> grad_log_maxsoftmax(const RgbImage& x, const LinearClassifier& clf,
                                        double temperature);

// x - zeta * sign(-grad), clamped to [0, 1]; sign(0) = 0.
RgbImage perturb(const RgbImage& x, const LinearClassifier& clf, const OdinParams& params);

DetectionScore baseline_score(const RgbImage& x, const LinearClassifier& clf);
DetectionScore odin_score(const RgbImage& x, const LinearClassifier& clf,
                          const OdinParams& params);

struct TrainParams {
  int epochs = 300;
  double learning_rate = 0.002;
  double l2 = 1e-4;
};

// Full-batch gradient descent on softmax cross-entropy from zero weights.
// Deterministic for a fixed input order.
LinearClassifier train_linear_classifier(std::span<const RgbImage> images,
                                         std::span<const int> labels, int num_classes,
                                         const TrainParams& params = {});

// Two concatenated OIDT float32 records: weights (N x d) then bias (N).
void write_classifier(const std::filesystem::path& path, const LinearClassifier& clf);
LinearClassifier read_classifier(const std::filesystem::path& path);

}  // namespace oidd::odin
