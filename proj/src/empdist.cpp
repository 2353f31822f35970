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

#include "oidd/empdist.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oidd/error.hpp"
#include "oidd/rng.hpp"
#include "oidd/tensorio.hpp"

namespace oidd::empdist {

Atom atom_of(const BinaryMap& map) {
  const auto bytes = tensorio::encode(tensorio::from_binary_map(map));
  return Atom(bytes.begin(), bytes.end());
}

Atom empty_atom() { return Atom{}; }

DiscreteDistribution::DiscreteDistribution(std::map<Atom, double> masses)
    : masses_(std::move(masses)) {
  if (masses_.empty()) throw Error(ErrorCode::kInvalidArgument, "distribution has no atoms");
  double total = 0.0;
  for (const auto& [atom, p] : masses_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::kInvalidArgument, "atom masses must be finite and >= 0");
    }
    total += p;
    cumulative_.emplace_back(total, &atom);
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "atom masses sum to " + std::to_string(total) + ", expected 1");
  }
}

double DiscreteDistribution::prob(const Atom& a) const {
  const auto it = masses_.find(a);
  return it == masses_.end() ? 0.0 : it->second;
}

const Atom& DiscreteDistribution::sample(double u01) const {
  const double target = u01 * cumulative_.back().first;
  const auto it = std::upper_bound(
      cumulative_.begin(), cumulative_.end(), target,
      [](double value, const std::pair<double, const Atom*>& e) { return value < e.first; });
  // Strict upper bound never lands on a zero-mass atom.
  return it == cumulative_.end() ? *cumulative_.back().second : *it->second;
}

DiscreteDistribution empirical(std::span<const Atom> samples) {
  if (samples.empty()) throw Error(ErrorCode::kEmptySample, "empirical() needs >= 1 sample");
  std::map<Atom, std::size_t> counts;
  for (const auto& a : samples) ++counts[a];
  std::map<Atom, double> masses;
  const auto n = static_cast<double>(samples.size());
  for (const auto& [atom, count] : counts) masses.emplace(atom, static_cast<double>(count) / n);
  return DiscreteDistribution(std::move(masses));
}

double d_k(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  double sup = 0.0;
  for (const auto& [atom, mass] : p.masses()) sup = std::max(sup, std::abs(mass - q.prob(atom)));
  for (const auto& [atom, mass] : q.masses()) sup = std::max(sup, std::abs(mass - p.prob(atom)));
  return sup;
}

DiscreteDistribution DeltaModel::sampling_distribution(const DiscreteDistribution& target) const {
  if (!(delta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 0");
  if (delta == 0.0) return target;
  auto masses = target.masses();
  auto top = masses.begin();
  for (auto it = masses.begin(); it != masses.end(); ++it) {
    if (it->second > top->second) top = it;
  }
  if (top->first == sink) throw Error(ErrorCode::kInvalidArgument, "sink is the target's top atom");
  if (top->second < delta) {
    throw Error(ErrorCode::kInvalidArgument, "delta exceeds the largest atom mass");
  }
  top->second -= delta;
  masses[sink] += delta;
  return DiscreteDistribution(std::move(masses));
}

std::string ConvergenceReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "n,d_k,delta_bound\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out << sizes[i] << ',' << distances[i] << ',' << delta_bound << '\n';
  }
  return out.str();
}

ConvergenceReport convergence_experiment(const DiscreteDistribution& target,
                                         const DeltaModel& model,
                                         std::span<const std::size_t> sizes, std::uint64_t seed) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw Error(ErrorCode::kInvalidArgument, "sample sizes must be ascending");
  }
  const DiscreteDistribution sampling = model.sampling_distribution(target);
  ConvergenceReport report;
  report.delta_bound = d_k(sampling, target);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    std::vector<Atom> draws;
    draws.reserve(sizes[i]);
    for (std::size_t k = 0; k < sizes[i]; ++k) draws.push_back(sampling.sample(uniform01(rng)));
    const auto estimate = empirical(draws);
    const double to_target = d_k(estimate, target);
    const double to_sampling = d_k(estimate, sampling);
    report.sizes.push_back(sizes[i]);
    report.distances.push_back(to_target);
    report.sampling_distances.push_back(to_sampling);
    if (!(to_target <= to_sampling + report.delta_bound + 1e-12)) report.triangle_holds = false;
  }
  return report;
}

}  // namespace oidd::empdist
