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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "oidd/image.hpp"

namespace oidd::empdist {

// Opaque atom: canonical bytes of an outcome, e.g. the OIDT encoding of a
// BinaryMap.
using Atom = std::string;

Atom atom_of(const BinaryMap& map);

// The empty-image atom.
Atom empty_atom();

// Finite distribution over distinct atoms. Construction validates that
// masses are non-negative and sum to one within 1e-9.
class DiscreteDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit DiscreteDistribution(std::map<Atom, double> masses);

  const std::map<Atom, double>& masses() const noexcept { return masses_; }
  double prob(const Atom& a) const;
  std::size_t support_size() const noexcept { return masses_.size(); }

  // Inverse-CDF draw in atom order.
  const Atom& sample(double u01) const;

 private:
  std::map<Atom, double> masses_;
  std::vector<std::pair<double, const Atom*>> cumulative_;
};

// count(a) / n for every observed atom. Throws EmptySample.
DiscreteDistribution empirical(std::span<const Atom> samples);

// sup over the union of supports of |p(a) - q(a)|.
double d_k(const DiscreteDistribution& p, const DiscreteDistribution& q);

// Extractor-error model: the sampling distribution moves `delta` mass from
// the target's most probable atom (first in atom order on ties) to `sink`,
// so d_k(sampling, target) == delta when the sink is outside the target.
struct DeltaModel {
  double delta = 0.0;
  Atom sink = empty_atom();

  DiscreteDistribution sampling_distribution(const DiscreteDistribution& target) const;
};

struct ConvergenceReport {
  std::vector<std::size_t> sizes;
  std::vector<double> distances;        // d_k(empirical_n, target)
  std::vector<double> sampling_distances;  // d_k(empirical_n, sampling)
  double delta_bound = 0.0;             // d_k(sampling, target)
  bool triangle_holds = true;           // every n: d(E,T) <= d(E,S) + d(S,T)

  std::string to_csv() const;
};

// For each n in ascending `sizes`, draws n iid atoms from the sampling
// distribution (fresh stream per n), forms the empirical measure and
// records its distance to the target.
ConvergenceReport convergence_experiment(const DiscreteDistribution& target,
                                         const DeltaModel& model,
                                         std::span<const std::size_t> sizes, std::uint64_t seed);

}  // namespace oidd::empdist
