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

#include "oidd/felzseg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oidd/error.hpp"

namespace oidd::felzseg {

namespace {

struct Edge {
  double weight;
  std::int32_t a;
  std::int32_t b;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::int32_t find(std::int32_t x) {
    std::int32_t root = x;
    while (parent_[static_cast<std::size_t>(root)] != root) {
      root = parent_[static_cast<std::size_t>(root)];
    }
    while (parent_[static_cast<std::size_t>(x)] != root) {
      const std::int32_t next = parent_[static_cast<std::size_t>(x)];
      parent_[static_cast<std::size_t>(x)] = root;
      x = next;
    }
    return root;
  }

  // Joins two roots, returns the new root.
  std::int32_t join(std::int32_t a, std::int32_t b) {
    auto ua = static_cast<std::size_t>(a);
    auto ub = static_cast<std::size_t>(b);
    if (rank_[ua] < rank_[ub]) std::swap(ua, ub);
    parent_[ub] = static_cast<std::int32_t>(ua);
    size_[ua] += size_[ub];
    if (rank_[ua] == rank_[ub]) ++rank_[ua];
    return static_cast<std::int32_t>(ua);
  }

  std::size_t size(std::int32_t root) const { return size_[static_cast<std::size_t>(root)]; }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<int> rank_;
  std::vector<std::size_t> size_;
};

double color_distance(const RgbImage& x, int r0, int c0, int r1, int c1) {
  const auto p = x.pixel(r0, c0);
  const auto q = x.pixel(r1, c1);
  double acc = 0.0;
  for (int ch = 0; ch < 3; ++ch) {
    const double d = 255.0 * (p[static_cast<std::size_t>(ch)] - q[static_cast<std::size_t>(ch)]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<Edge> grid_edges(const RgbImage& x) {
  const int h = x.height();
  const int w = x.width();
  // E, S, SE, SW
  constexpr int kDr[4] = {0, 1, 1, 1};
  constexpr int kDc[4] = {1, 0, 1, -1};
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * 4);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int d = 0; d < 4; ++d) {
        const int rr = r + kDr[d];
        const int cc = c + kDc[d];
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        edges.push_back({color_distance(x, r, c, rr, cc), r * w + c, rr * w + cc});
      }
    }
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& lhs, const Edge& rhs) { return lhs.weight < rhs.weight; });
  return edges;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : kernel) v /= total;
  return kernel;
}

}  // namespace

std::vector<std::size_t> SegmentLabeling::segment_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(num_segments), 0);
  for (auto id : labels) ++sizes[static_cast<std::size_t>(id)];
  return sizes;
}

RgbImage gaussian_smooth(const RgbImage& x, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "smoothing sigma must be >= 0");
  if (sigma == 0.0) return x;
  const auto kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int h = x.height();
  const int w = x.width();
  auto idx = [w](int r, int c, int ch) {
    return (static_cast<std::size_t>(r) * static_cast<std::size_t>(w) +
            static_cast<std::size_t>(c)) * 3 + static_cast<std::size_t>(ch);
  };

  std::vector<double> tmp(x.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int cc = std::clamp(c + k, 0, w - 1);
          acc += kernel[static_cast<std::size_t>(k + radius)] * x.at(r, cc, ch);
        }
        tmp[idx(r, c, ch)] = acc;
      }
    }
  }
  std::vector<double> out(x.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int rr = std::clamp(r + k, 0, h - 1);
          acc += kernel[static_cast<std::size_t>(k + radius)] * tmp[idx(rr, c, ch)];
        }
        out[idx(r, c, ch)] = std::clamp(acc, 0.0, 1.0);
      }
    }
  }
  return RgbImage(h, w, std::move(out));
}

SegmentLabeling felzenszwalb(const RgbImage& input, const FelzParams& p) {
  if (!(p.k > 0.0)) throw Error(ErrorCode::kInvalidArgument, "k must be > 0");
  if (p.min_size < 1) throw Error(ErrorCode::kInvalidArgument, "min_size must be >= 1");
  const RgbImage x = gaussian_smooth(input, p.smoothing_sigma);
  const std::size_t n = static_cast<std::size_t>(x.height()) * static_cast<std::size_t>(x.width());
  const auto edges = grid_edges(x);

  DisjointSets sets(n);
  // Internal difference plus tau of each component, indexed by root.
  std::vector<double> threshold(n, p.k);
  for (const Edge& e : edges) {
    const std::int32_t a = sets.find(e.a);
    const std::int32_t b = sets.find(e.b);
    if (a == b) continue;
    if (e.weight <= threshold[static_cast<std::size_t>(a)] &&
        e.weight <= threshold[static_cast<std::size_t>(b)]) {
      const std::int32_t root = sets.join(a, b);
      threshold[static_cast<std::size_t>(root)] =
          e.weight + p.k / static_cast<double>(sets.size(root));
    }
  }

  // Undersized components absorb across their lightest boundary edge.
  for (const Edge& e : edges) {
    const std::int32_t a = sets.find(e.a);
    const std::int32_t b = sets.find(e.b);
    if (a != b && (sets.size(a) < static_cast<std::size_t>(p.min_size) ||
                   sets.size(b) < static_cast<std::size_t>(p.min_size))) {
      sets.join(a, b);
    }
  }

  SegmentLabeling out{x.height(), x.width(), std::vector<std::int32_t>(n), 0};
  std::vector<std::int32_t> dense(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = static_cast<std::size_t>(sets.find(static_cast<std::int32_t>(i)));
    if (dense[root] < 0) dense[root] = out.num_segments++;
    out.labels[i] = dense[root];
  }
  return out;
}

BinaryMap remove_background(const SegmentLabeling& s, const CenterParams& c) {
  if (!(c.rho > 0.0 && c.rho <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in (0, 1]");
  }
  const auto segments = static_cast<std::size_t>(s.num_segments);
  std::vector<double> row_sum(segments, 0.0);
  std::vector<double> col_sum(segments, 0.0);
  std::vector<std::size_t> count(segments, 0);
  std::vector<bool> touches_border(segments, false);
  for (int r = 0; r < s.height; ++r) {
    for (int col = 0; col < s.width; ++col) {
      const auto id = static_cast<std::size_t>(s.at(r, col));
      row_sum[id] += r + 0.5;
      col_sum[id] += col + 0.5;
      ++count[id];
      if (r == 0 || col == 0 || r == s.height - 1 || col == s.width - 1) touches_border[id] = true;
    }
  }

  const double row_lo = 0.5 * s.height * (1.0 - c.rho);
  const double row_hi = 0.5 * s.height * (1.0 + c.rho);
  const double col_lo = 0.5 * s.width * (1.0 - c.rho);
  const double col_hi = 0.5 * s.width * (1.0 + c.rho);
  std::vector<std::uint8_t> keep(segments, 0);
  for (std::size_t id = 0; id < segments; ++id) {
    if (count[id] == 0) continue;
    const double cr = row_sum[id] / static_cast<double>(count[id]);
    const double cc = col_sum[id] / static_cast<double>(count[id]);
    const bool centered = cr >= row_lo && cr <= row_hi && cc >= col_lo && cc <= col_hi;
    keep[id] = centered && !(c.drop_border_touching && touches_border[id]) ? 1 : 0;
  }

  std::vector<std::uint8_t> data(s.labels.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = keep[static_cast<std::size_t>(s.labels[i])];
  return BinaryMap(s.height, s.width, std::move(data));
}

BinaryMap n_r(const RgbImage& x, const FelzParams& p, const CenterParams& c) {
  return remove_background(felzenszwalb(x, p), c);
}

}  // namespace oidd::felzseg
