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

#include <cmath>
#include <filesystem>

#include "oidd/error.hpp"
#include "oidd/odinprep.hpp"
#include "oracles.hpp"

using namespace oidd;
using namespace oidd::odin;
using oidd::testing::TestRng;

namespace {

LinearClassifier random_classifier(TestRng& rng, int n, std::size_t dim, double scale = 1.0) {
  std::vector<double> w(static_cast<std::size_t>(n) * dim);
  std::vector<double> b(static_cast<std::size_t>(n));
  for (auto& v : w) v = oidd::testing::uniform(rng, -scale, scale);
  for (auto& v : b) v = oidd::testing::uniform(rng, -scale, scale);
  return LinearClassifier(n, dim, std::move(w), std::move(b));
}

double log_max_softmax(const LinearClassifier& clf, const std::vector<double>& x, double t) {
  const auto p = softmax_t(clf.logits(x), t);
  return std::log(*std::max_element(p.begin(), p.end()));
}

}  // namespace

TEST(Softmax, TwoClassExample) {
  const std::vector<double> z{1.0, 0.0};
  const auto p = softmax_t(z, 1.0);
  EXPECT_NEAR(p[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
}

TEST(Softmax, LargeLogitsStayFinite) {
  const std::vector<double> z{1000.0, 999.0, -1000.0};
  const auto p = softmax_t(z, 1.0);
  for (double v : p) EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(p[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-12);
}

TEST(Softmax, TemperatureFlattens) {
  const std::vector<double> z{3.0, 1.0, 0.0};
  const auto p = softmax_t(z, 1000.0);
  for (double v : p) EXPECT_NEAR(v, 1.0 / 3.0, 1e-2);
  const auto scaled = softmax_t(std::vector<double>{0.3, 0.1, 0.0}, 100.0);
  const auto ref = softmax_t(std::vector<double>{3.0, 1.0, 0.0}, 1000.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(scaled[i], ref[i], 1e-15);
}

TEST(Softmax, RejectsNonFiniteAndBadTemperature) {
  const std::vector<double> bad{1.0, NAN};
  const std::vector<double> ok{1.0, 2.0};
  try {
    softmax_t(bad, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteLogit);
  }
  EXPECT_THROW(softmax_t(ok, 0.0), Error);
}

TEST(Gradient, MatchesCentralDifferences) {
  TestRng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int h = 2, w = 3;
    const auto x = oidd::testing::random_image(rng, h, w);
    const auto clf = random_classifier(rng, oidd::testing::uniform_int(rng, 2, 6), h * w * 3);
    const double t = std::pow(10.0, oidd::testing::uniform(rng, 0.0, 3.0));
    const auto g = grad_log_maxsoftmax(x, clf, t);
    std::vector<double> xv(x.data().begin(), x.data().end());
    const double step = 1e-6;
    for (std::size_t d = 0; d < xv.size(); ++d) {
      auto up = xv, down = xv;
      up[d] += step;
      down[d] -= step;
      const double fd = (log_max_softmax(clf, up, t) - log_max_softmax(clf, down, t)) / (2 * step);
      const double denom = std::max({std::abs(fd), std::abs(g[d]), 1e-8});
      EXPECT_LT(std::abs(fd - g[d]) / denom, 1e-4) << "trial " << trial << " dim " << d;
    }
  }
}

TEST(Perturb, ZeroZetaReturnsInput) {
  TestRng rng(2);
  const auto x = oidd::testing::random_image(rng, 3, 3);
  const auto clf = random_classifier(rng, 3, 27);
  EXPECT_EQ(perturb(x, clf, {0.0, 1000.0}), x);
}

TEST(Perturb, ClampsToUnitInterval) {
  TestRng rng(3);
  const auto x = RgbImage::filled(2, 2, 1.0);
  const auto clf = random_classifier(rng, 3, 12);
  const auto y = perturb(x, clf, {0.5, 1.0});
  for (double v : y.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_TRUE(v == 1.0 || v == 0.5);
  }
}

TEST(Perturb, MovesEachCoordinateByAtMostZeta) {
  TestRng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = oidd::testing::random_image(rng, 3, 2);
    const auto clf = random_classifier(rng, 4, 18);
    const auto y = perturb(x, clf, {0.003, 100.0});
    for (std::size_t d = 0; d < 18; ++d) EXPECT_LE(std::abs(y.data()[d] - x.data()[d]), 0.003 + 1e-15);
  }
}

TEST(Scores, BaselineIsMaxSoftmaxAtUnitTemperature) {
  // Logits (1, 0) from a zero-weight classifier with bias.
  const LinearClassifier clf(2, 3, std::vector<double>(6, 0.0), {1.0, 0.0});
  const auto x = RgbImage::filled(1, 1, 0.5);
  const auto s = baseline_score(x, clf);
  EXPECT_NEAR(s.value, std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_EQ(s.kind, ScoreKind::kBaseline);
}

TEST(Scores, OdinWithoutPerturbationOrTemperatureIsBaseline) {
  TestRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = oidd::testing::random_image(rng, 2, 2);
    const auto clf = random_classifier(rng, 3, 12);
    EXPECT_DOUBLE_EQ(odin_score(x, clf, {0.0, 1.0}).value, baseline_score(x, clf).value);
  }
}

TEST(Scores, PerturbationRaisesTemperedConfidence) {
  TestRng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = RgbImage::filled(3, 3, 0.5);
    const auto clf = random_classifier(rng, 3, 27);
    EXPECT_GE(odin_score(x, clf, {0.01, 10.0}).value, odin_score(x, clf, {0.0, 10.0}).value);
  }
}

TEST(Classifier, RejectsBadShapes) {
  EXPECT_THROW(LinearClassifier(1, 2, {1, 2}, {0}), Error);
  EXPECT_THROW(LinearClassifier(2, 2, {1, 2, 3}, {0, 0}), Error);
  EXPECT_THROW(LinearClassifier(2, 1, {1, NAN}, {0, 0}), Error);
}

TEST(Classifier, FileRoundTrip) {
  TestRng rng(7);
  // float32 storage: use values exactly representable.
  std::vector<double> w(4 * 6), b(4);
  for (auto& v : w) v = static_cast<float>(oidd::testing::uniform(rng, -1, 1));
  for (auto& v : b) v = static_cast<float>(oidd::testing::uniform(rng, -1, 1));
  const LinearClassifier clf(4, 6, w, b);
  const auto path = std::filesystem::temp_directory_path() / "oidd_unit_clf.oidt";
  write_classifier(path, clf);
  const auto back = read_classifier(path);
  EXPECT_EQ(back.num_classes(), 4);
  EXPECT_EQ(std::vector<double>(back.weights().begin(), back.weights().end()), w);
  EXPECT_EQ(std::vector<double>(back.bias().begin(), back.bias().end()), b);
}

TEST(Training, SeparatesTwoConstantColors) {
  std::vector<RgbImage> images;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    images.push_back(RgbImage::filled(2, 2, i % 2 ? 0.9 : 0.1));
    labels.push_back(i % 2);
  }
  const auto clf = train_linear_classifier(images, labels, 2, {300, 0.05, 1e-4});
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto z = clf.logits(images[i]);
    EXPECT_EQ(z[1] > z[0] ? 1 : 0, labels[i]);
  }
  const auto again = train_linear_classifier(images, labels, 2, {300, 0.05, 1e-4});
  EXPECT_TRUE(std::equal(clf.weights().begin(), clf.weights().end(), again.weights().begin()));
}
