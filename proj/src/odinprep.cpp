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

#include "oidd/odinprep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oidd/error.hpp"
#include "oidd/tensorio.hpp"

namespace oidd {

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kBls: return "bls";
    case ScoreKind::kOds: return "ods";
    case ScoreKind::kSsimMax: return "ssim";
    case ScoreKind::kBaseline: return "baseline";
    case ScoreKind::kOdin: return "odin";
  }
  return "unknown";
}

}  // namespace oidd

namespace oidd::odin {

namespace {

std::size_t argmax_lowest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

LinearClassifier::LinearClassifier(int num_classes, std::size_t dim,
                                   std::vector<double> weights, std::vector<double> bias)
    : num_classes_(num_classes), dim_(dim), weights_(std::move(weights)), bias_(std::move(bias)) {
  if (num_classes_ < 2) throw Error(ErrorCode::kInvalidArgument, "classifier needs N >= 2");
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "classifier needs d >= 1");
  if (weights_.size() != static_cast<std::size_t>(num_classes_) * dim_ ||
      bias_.size() != static_cast<std::size_t>(num_classes_)) {
    throw Error(ErrorCode::kShapeMismatch, "classifier weights must be N x d, bias N");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(weights_.begin(), weights_.end(), finite) ||
      !std::all_of(bias_.begin(), bias_.end(), finite)) {
    throw Error(ErrorCode::kInvalidArgument, "classifier parameters must be finite");
  }
}

std::vector<double> LinearClassifier::logits(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw Error(ErrorCode::kShapeMismatch, "input has " + std::to_string(x.size()) +
                                               " values, classifier expects " +
                                               std::to_string(dim_));
  }
  std::vector<double> out(bias_.begin(), bias_.end());
  for (int c = 0; c < num_classes_; ++c) {
    const auto w = row(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) acc += w[i] * x[i];
    out[static_cast<std::size_t>(c)] += acc;
  }
  return out;
}

std::vector<double> softmax_t(std::span<const double> logits, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be finite and > 0");
  }
  if (logits.empty()) throw Error(ErrorCode::kInvalidArgument, "empty logit vector");
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!std::isfinite(logits[i])) {
      throw Error(ErrorCode::kNonFiniteLogit, "logit " + std::to_string(i) + " is not finite");
    }
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp((logits[i] - top) / temperature);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> grad_log_maxsoftmax(const RgbImage& x, const LinearClassifier& clf,
                                        double temperature) {
  const auto probs = softmax_t(clf.logits(x), temperature);
  const std::size_t winner = argmax_lowest(probs);

  std::vector<double> grad(clf.dim(), 0.0);
  for (int c = 0; c < clf.num_classes(); ++c) {
    const double coeff = (static_cast<std::size_t>(c) == winner ? 1.0 : 0.0) -
                         probs[static_cast<std::size_t>(c)];
    if (coeff == 0.0) continue;
    const auto w = clf.row(c);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += coeff * w[i];
  }
  for (double& g : grad) g /= temperature;
  return grad;
}

RgbImage perturb(const RgbImage& x, const LinearClassifier& clf, const OdinParams& params) {
  if (!(params.zeta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "zeta must be >= 0");
  if (params.zeta == 0.0) return x;
  const auto grad = grad_log_maxsoftmax(x, clf, params.temperature);
  std::vector<double> out(x.data().begin(), x.data().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    // x - zeta * sign(-g) == x + zeta * sign(g)
    const double s = grad[i] > 0.0 ? 1.0 : (grad[i] < 0.0 ? -1.0 : 0.0);
    out[i] = std::clamp(out[i] + params.zeta * s, 0.0, 1.0);
  }
  return RgbImage(x.height(), x.width(), std::move(out));
}

DetectionScore baseline_score(const RgbImage& x, const LinearClassifier& clf) {
  const auto probs = softmax_t(clf.logits(x), 1.0);
  return {*std::max_element(probs.begin(), probs.end()), ScoreKind::kBaseline};
}

DetectionScore odin_score(const RgbImage& x, const LinearClassifier& clf,
                          const OdinParams& params) {
  const auto probs = softmax_t(clf.logits(perturb(x, clf, params)), params.temperature);
  return {*std::max_element(probs.begin(), probs.end()), ScoreKind::kOdin};
}

LinearClassifier train_linear_classifier(std::span<const RgbImage> images,
                                         std::span<const int> labels, int num_classes,
                                         const TrainParams& params) {
  if (images.empty() || images.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need one label per training image");
  }
  const std::size_t dim = images.front().size();
  const auto n = static_cast<std::size_t>(num_classes);
  std::vector<double> weights(n * dim, 0.0);
  std::vector<double> bias(n, 0.0);
  std::vector<double> grad_w(n * dim);
  std::vector<double> grad_b(n);
  const double inv_count = 1.0 / static_cast<double>(images.size());

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (std::size_t s = 0; s < images.size(); ++s) {
      const auto x = images[s].data();
      if (x.size() != dim) throw Error(ErrorCode::kShapeMismatch, "training images differ in size");
      if (labels[s] < 0 || labels[s] >= num_classes) {
        throw Error(ErrorCode::kInvalidArgument, "training label out of range");
      }
      std::vector<double> logits(bias);
      for (std::size_t c = 0; c < n; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) acc += weights[c * dim + i] * x[i];
        logits[c] += acc;
      }
      const auto probs = softmax_t(logits, 1.0);
      for (std::size_t c = 0; c < n; ++c) {
        const double err = probs[c] - (static_cast<int>(c) == labels[s] ? 1.0 : 0.0);
        grad_b[c] += err;
        for (std::size_t i = 0; i < dim; ++i) grad_w[c * dim + i] += err * x[i];
      }
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
      weights[k] -= params.learning_rate * (grad_w[k] * inv_count + params.l2 * weights[k]);
    }
    for (std::size_t c = 0; c < n; ++c) bias[c] -= params.learning_rate * grad_b[c] * inv_count;
  }
  return LinearClassifier(num_classes, dim, std::move(weights), std::move(bias));
}

void write_classifier(const std::filesystem::path& path, const LinearClassifier& clf) {
  const std::vector<float> w(clf.weights().begin(), clf.weights().end());
  const std::vector<float> b(clf.bias().begin(), clf.bias().end());
  auto bytes = tensorio::encode(tensorio::TensorFile::from_floats(
      {static_cast<std::uint32_t>(clf.num_classes()), static_cast<std::uint32_t>(clf.dim())}, w));
  const auto tail = tensorio::encode(
      tensorio::TensorFile::from_floats({static_cast<std::uint32_t>(clf.num_classes())}, b));
  bytes.insert(bytes.end(), tail.begin(), tail.end());
  tensorio::write_file_bytes(path, bytes);
}

LinearClassifier read_classifier(const std::filesystem::path& path) {
  const auto bytes = tensorio::read_file_bytes(path);
  std::size_t offset = 0;
  const auto w = tensorio::decode(bytes, offset);
  const auto b = tensorio::decode(bytes, offset);
  if (offset != bytes.size()) {
    throw Error(ErrorCode::kTrailingBytes, "bytes after classifier bias record", offset);
  }
  if (w.dims.size() != 2 || b.dims.size() != 1 || w.dims[0] != b.dims[0]) {
    throw Error(ErrorCode::kShapeMismatch, "classifier file must hold N x d weights and N bias");
  }
  const auto wf = w.floats();
  const auto bf = b.floats();
  return LinearClassifier(static_cast<int>(w.dims[0]), w.dims[1],
                          std::vector<double>(wf.begin(), wf.end()),
                          std::vector<double>(bf.begin(), bf.end()));
}

}  // namespace oidd::odin
