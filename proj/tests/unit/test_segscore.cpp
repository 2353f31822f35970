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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>

#include "oidd/error.hpp"
#include "oidd/segscore.hpp"
#include "oidd/tensorio.hpp"
#include "oracles.hpp"

using namespace oidd;
using namespace oidd::segscore;
using oidd::testing::TestRng;

namespace {

const std::filesystem::path kFixtures = OIDD_FIXTURES_DIR;

SegMap one_pixel(std::vector<double> q) {
  const int n = static_cast<int>(q.size()) - 1;
  return SegMap(1, 1, n, std::move(q));
}

// Returns a fixed map and remembers what it was asked to segment.
class RecordingBackend final : public SegmentationBackend {
 public:
  explicit RecordingBackend(SegMap map) : map_(std::move(map)) {}
  SegMap segment(const RgbImage& x) const override {
    seen_.push_back(x);
    return map_;
  }
  mutable std::vector<RgbImage> seen_;

 private:
  SegMap map_;
};

// Class evidence grows with the mean red channel, so the map depends on x.
class RedBackend final : public SegmentationBackend {
 public:
  SegMap segment(const RgbImage& x) const override {
    std::vector<double> data;
    for (int i = 0; i < x.height(); ++i) {
      for (int j = 0; j < x.width(); ++j) {
        const double r = x.at(i, j, 0);
        data.insert(data.end(), {0.5 * r, 0.25 * r, 1.0 - 0.75 * r});
      }
    }
    return SegMap(x.height(), x.width(), 2, std::move(data));
  }
};

odin::LinearClassifier random_classifier(TestRng& rng, int n, std::size_t dim) {
  std::vector<double> w(static_cast<std::size_t>(n) * dim);
  std::vector<double> b(static_cast<std::size_t>(n));
  for (auto& v : w) v = oidd::testing::uniform(rng, -1, 1);
  for (auto& v : b) v = oidd::testing::uniform(rng, -1, 1);
  return odin::LinearClassifier(n, dim, std::move(w), std::move(b));
}

}  // namespace

TEST(VScore, WorkedExamples) {
  const std::vector<double> a{0.7, 0.2, 0.1};
  const std::vector<double> b{0.2, 0.1, 0.7};
  const std::vector<double> tie{0.45, 0.1, 0.45};
  EXPECT_DOUBLE_EQ(v_score(a), 0.7);
  EXPECT_EQ(v_score(b), 0.0);
  EXPECT_DOUBLE_EQ(v_score(tie), 0.45);
}

TEST(Bls, FixtureAveragesNonBackgroundPixels) {
  // Pixels score 0.8, 0.6, 0, 0.
  const auto m = tensorio::as_segmap(tensorio::read_tensor(kFixtures / "segmap_bls_2x2.oidt"), 2);
  const auto s = bls(m);
  EXPECT_NEAR(s.value, 0.7, 1e-6);
  EXPECT_EQ(s.kind, ScoreKind::kBls);
}

TEST(Bls, AllBackgroundIsZero) {
  const auto m =
      tensorio::as_segmap(tensorio::read_tensor(kFixtures / "segmap_all_background_4x4.oidt"), 2);
  EXPECT_EQ(bls(m).value, 0.0);
}

TEST(Bls, FileBackendServesFixture) {
  const FileSegmentationBackend backend(kFixtures / "segmap_bls_2x2.oidt", 2);
  const auto x = RgbImage::filled(2, 2, 0.5);
  EXPECT_NEAR(bls(backend.segment(x)).value, 0.7, 1e-6);
  EXPECT_EQ(detect_alg2(x, backend, 0.8), 1);
  EXPECT_EQ(detect_alg2(x, backend, 0.6), 0);
}

TEST(Bls, FileBackendRejectsSizeMismatch) {
  const FileSegmentationBackend backend(kFixtures / "segmap_bls_2x2.oidt", 2);
  EXPECT_THROW(backend.segment(RgbImage::filled(3, 2, 0.5)), Error);
}

TEST(Bls, MatchesOracleOnRandomMaps) {
  TestRng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = oidd::testing::random_segmap(rng, oidd::testing::uniform_int(rng, 1, 32),
                                                oidd::testing::uniform_int(rng, 1, 32),
                                                oidd::testing::uniform_int(rng, 1, 9));
    ASSERT_NEAR(bls(m).value, oidd::testing::oracle_bls(m), 1e-9);
  }
}

TEST(Bls, StaysInUnitInterval) {
  TestRng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = bls(oidd::testing::random_segmap(rng, 6, 5, 4)).value;
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Bls, InvariantUnderPixelPermutation) {
  TestRng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int h = 5, w = 7, n = 3;
    const auto m = oidd::testing::random_segmap(rng, h, w, n);
    std::vector<int> order(h * w);
    for (int i = 0; i < h * w; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> data;
    for (int p : order) {
      for (int k = 0; k <= n; ++k) data.push_back(m.data()[static_cast<std::size_t>(p) * (n + 1) + k]);
    }
    EXPECT_NEAR(bls(SegMap(h, w, n, data)).value, bls(m).value, 1e-12);
  }
}

TEST(Bls, AddingAStrongerForegroundPixelDoesNotLowerTheScore) {
  TestRng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oidd::testing::random_segmap(rng, 1, 6, 2);
    std::vector<double> data(m.data().begin(), m.data().end());
    const double before = bls(m).value;
    // Append a foreground pixel whose score is at least the current mean.
    const double top = std::max(before, 0.5);
    data.insert(data.end(), {top, (1 - top) / 2, (1 - top) / 2});
    EXPECT_GE(bls(SegMap(1, 7, 2, data)).value, before - 1e-12);
  }
}

TEST(Bls, SingleForegroundPixelEqualsItsScore) {
  EXPECT_DOUBLE_EQ(bls(one_pixel({0.3, 0.25, 0.2, 0.25})).value, 0.3);
}

TEST(SegmentationVerdict, InequalityIsStrict) {
  EXPECT_EQ(verdict(0.5, 0.5), 0);
  EXPECT_EQ(verdict(0.4999, 0.5), 1);
  RecordingBackend backend(one_pixel({0.5, 0.25, 0.25}));
  const auto x = RgbImage::filled(1, 1, 0.0);
  EXPECT_EQ(detect_alg2(x, backend, 0.5), 0);
  EXPECT_EQ(detect_alg2(x, backend, std::nextafter(0.5, 1.0)), 1);
}

TEST(SegmentationVerdict, RejectsEpsilonOutsideUnitInterval) {
  RecordingBackend backend(one_pixel({0.5, 0.25, 0.25}));
  const auto x = RgbImage::filled(1, 1, 0.0);
  EXPECT_THROW(detect_alg2(x, backend, 1.5), Error);
  EXPECT_THROW(detect_alg2(x, backend, -0.1), Error);
}

TEST(Ods, ZeroZetaIsBitwiseBls) {
  TestRng rng(77);
  const RedBackend seg;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = oidd::testing::random_image(rng, 4, 5);
    const auto clf = random_classifier(rng, 3, 4 * 5 * 3);
    const double a = ods(x, clf, seg, 0.0, 1000.0).value;
    const double b = bls(seg.segment(x)).value;
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
  }
}

TEST(Ods, SegmentsTheOdinPerturbedInput) {
  TestRng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = oidd::testing::random_image(rng, 3, 3);
    const auto clf = random_classifier(rng, 4, 27);
    const double zeta = 0.01, temperature = 10.0;
    RecordingBackend backend(one_pixel({0.6, 0.3, 0.1}));
    ods(x, clf, backend, zeta, temperature);
    ASSERT_EQ(backend.seen_.size(), 1u);

    // Expected input, built from the closed-form gradient with a plain softmax.
    const auto z = clf.logits(x);
    std::vector<double> p(z.size());
    double denom = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) denom += std::exp(z[j] / temperature);
    for (std::size_t j = 0; j < z.size(); ++j) p[j] = std::exp(z[j] / temperature) / denom;
    const int c = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    for (std::size_t d = 0; d < 27; ++d) {
      double g = clf.row(c)[d];
      for (int j = 0; j < 4; ++j) g -= p[j] * clf.row(j)[d];
      const double s = g > 0 ? 1.0 : (g < 0 ? -1.0 : 0.0);
      const double expect = std::clamp(x.data()[d] + zeta * s, 0.0, 1.0);
      EXPECT_NEAR(backend.seen_[0].data()[d], expect, 1e-15);
    }
  }
}
