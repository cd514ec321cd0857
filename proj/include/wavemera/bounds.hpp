// Copyright 2026 The wavemera Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "wavemera/error.hpp"
#include "wavemera/fermion1d.hpp"
#include "wavemera/filters.hpp"

namespace wavemera {

inline constexpr double kEpsilonMargin = 1e-6;
inline constexpr double kPowersStormerLimit = 1.0 / 6.0;

struct BoundReport {
  double epsilon = 0.0;
  double B = 1.0;
  int M = 2;
  int D = 1;
  int N = 1;
  std::optional<int> layers;  // empty: depth term dropped
  double C = 0.0;
  double delta = 0.0;
  double bound = 0.0;
  double measured = 0.0;
  bool satisfied = true;
  // Randomized runs only.
  std::uint64_t seed = 0;
  int trials = 0;
  int gap_violations = 0;
  double max_gap = 0.0;
};

/// C = 2^(3/2) sqrt(D) B M, delta = C 2^(-L/2) + 6 eps log2^2(C/eps),
/// bound = 24 sqrt(N) sqrt(delta).
inline BoundReport theorem_bound(double epsilon, double B, int M, int D, int N, std::optional<int> layers) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("theorem_bound: epsilon must lie in (0, 1)");
  if (!(B >= 1.0)) throw PreconditionError("theorem_bound: B must be >= 1");
  if (M < 2) throw PreconditionError("theorem_bound: M must be >= 2");
  if (D < 1) throw PreconditionError("theorem_bound: D must be >= 1");
  if (N < 1) throw PreconditionError("theorem_bound: N must be >= 1");
  if (layers && *layers < 1) throw PreconditionError("theorem_bound: layers must be >= 1");
  BoundReport r;
  r.epsilon = epsilon;
  r.B = B;
  r.M = M;
  r.D = D;
  r.N = N;
  r.layers = layers;
  r.C = std::pow(2.0, 1.5) * std::sqrt(static_cast<double>(D)) * B * M;
  const double lg = std::log2(r.C / epsilon);
  r.delta = 6.0 * epsilon * lg * lg;
  if (layers) r.delta += r.C * std::pow(2.0, -0.5 * *layers);
  r.bound = 24.0 * std::sqrt(static_cast<double>(N)) * std::sqrt(r.delta);
  return r;
}

/// Epsilon fed into the bound: the refined estimate plus a safety margin.
inline double bound_epsilon(const FilterPair& pair) { return pair.epsilon + kEpsilonMargin; }

inline BoundReport theorem_bound(const FilterPair& pair, int D, int N, int layers) {
  return theorem_bound(bound_epsilon(pair), std::max(1.0, pair.B), pair.M, D, N, layers);
}

/// Operator norm of the difference of two symbols on the same sites.
template <class Site>
double symbol_distance(const SymbolBlock<Site>& a, const SymbolBlock<Site>& b) {
  if (a.sites != b.sites) throw PreconditionError("symbol_distance: site lists differ");
  if (a.size() == 0) return 0.0;
  const Eigen::MatrixXcd d = a.matrix - b.matrix;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct GapReport {
  double gap = 0.0;
  double two_delta = 0.0;
  bool ok = true;
};

inline constexpr std::size_t kMaxGapSites = 256;

inline GapReport single_particle_gap(const FilterPair& pair, const FilledModeSet& modes,
                                     const std::vector<std::int64_t>& sites) {
  if (sites.empty() || sites.size() > kMaxGapSites)
    throw PreconditionError("single_particle_gap: need between 1 and 256 sites");
  GapReport g;
  g.gap = symbol_distance(restricted_symbol(ExactGroundState{}, sites), restricted_symbol(modes, sites));
  g.two_delta = 2.0 * theorem_bound(pair, static_cast<int>(sites.size()), 1, modes.layers()).delta;
  g.ok = g.gap <= g.two_delta;
  return g;
}

inline GapReport single_particle_gap(const FilterPair& pair, int layers, const std::vector<std::int64_t>& sites) {
  return single_particle_gap(pair, FilledModeSet(pair, layers), sites);
}

namespace detail {

inline int union_support(const std::vector<ModeSeq>& f) {
  std::set<std::int64_t> s;
  for (const auto& m : f)
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m.values[i] != 0.0) s.insert(m.offset + static_cast<std::int64_t>(i));
  return static_cast<int>(s.size());
}

inline std::vector<std::int64_t> support_sites(const std::vector<ModeSeq>& f) {
  std::set<std::int64_t> s;
  for (const auto& m : f)
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m.values[i] != 0.0) s.insert(m.offset + static_cast<std::int64_t>(i));
  return {s.begin(), s.end()};
}

}  // namespace detail

/// |G_exact - G_mera| for one observable list, against the bound with D
/// the size of the union of supports.
inline BoundReport verify_correlation_bound(const FilterPair& pair, const FilledModeSet& modes,
                                            const std::vector<ModeSeq>& f) {
  if (f.size() % 2 != 0) throw PreconditionError("verify_correlation_bound: need an even number of observables");
  for (const auto& m : f)
    if (m.norm() > 1.0 + 1e-12) throw PreconditionError("verify_correlation_bound: observables must have norm <= 1");
  const int N = std::max<int>(1, static_cast<int>(f.size() / 2));
  const std::vector<std::int64_t> sites = detail::support_sites(f);
  BoundReport r = theorem_bound(pair, std::max(1, detail::union_support(f)), N, modes.layers());
  r.trials = 1;
  if (!f.empty() && !sites.empty()) {
    const auto exact = restricted_symbol(ExactGroundState{}, sites);
    const auto mera = restricted_symbol(modes, sites);
    r.measured = std::abs(wick_correlation(exact, f) - wick_correlation(mera, f));
  }
  r.satisfied = r.measured <= r.bound;
  return r;
}

inline BoundReport verify_correlation_bound(const FilterPair& pair, int layers, const std::vector<ModeSeq>& f) {
  return verify_correlation_bound(pair, FilledModeSet(pair, layers), f);
}

struct RandomObservableSpec {
  int max_N = 2;
  int max_D = 6;
  std::int64_t window = 64;  // supports start in [-window, window]
};

/// Random observables for one trial: 2N vectors on D contiguous sites with
/// norms uniform in (0, 1].
inline std::vector<ModeSeq> random_observables(std::mt19937_64& rng, const RandomObservableSpec& spec) {
  std::uniform_int_distribution<int> nd(1, spec.max_N), dd(1, spec.max_D);
  std::uniform_int_distribution<std::int64_t> od(-spec.window, spec.window);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  const int N = nd(rng), D = dd(rng);
  const std::int64_t start = od(rng);
  std::vector<ModeSeq> f;
  for (int i = 0; i < 2 * N; ++i) {
    std::vector<cplx> v(static_cast<std::size_t>(D));
    for (auto& c : v) c = cplx(gauss(rng), gauss(rng));
    ModeSeq m(start, std::move(v));
    m *= (1.0 - radius(rng)) / m.norm();
    f.push_back(std::move(m));
  }
  return f;
}

/// Randomized verification over `trials` seeded draws, also checking the
/// single-particle inequality on each draw's sites. The report carries the
/// trial with the largest measured / bound ratio.
inline BoundReport verify_correlation_bound_random(const FilterPair& pair, const FilledModeSet& modes, int trials,
                                                   std::uint64_t seed, const RandomObservableSpec& spec = {}) {
  if (trials < 1) throw PreconditionError("verify_correlation_bound_random: trials must be >= 1");
  BoundReport worst;
  double worst_margin = -1.0;
  int gap_violations = 0;
  double max_gap = 0.0;
  bool all_ok = true;
  for (int t = 0; t < trials; ++t) {
    std::seed_seq ss{seed, static_cast<std::uint64_t>(t)};
    std::mt19937_64 rng(ss);
    const auto f = random_observables(rng, spec);
    BoundReport r = verify_correlation_bound(pair, modes, f);
    const GapReport g = single_particle_gap(pair, modes, detail::support_sites(f));
    max_gap = std::max(max_gap, g.gap);
    if (!g.ok) ++gap_violations;
    all_ok = all_ok && r.satisfied;
    const double margin = r.measured / r.bound;
    if (margin > worst_margin) {
      worst_margin = margin;
      worst = r;
    }
  }
  worst.seed = seed;
  worst.trials = trials;
  worst.gap_violations = gap_violations;
  worst.max_gap = max_gap;
  worst.satisfied = all_ok && gap_violations == 0;
  return worst;
}

struct Envelope {
  double value = 0.0;
  bool valid = true;  // value below 1/6
};

/// 24 sqrt(N ||exact - mera||).
template <class Site>
Envelope powers_stormer_envelope(const SymbolBlock<Site>& exact, const SymbolBlock<Site>& mera, int N) {
  if (N < 1) throw PreconditionError("powers_stormer_envelope: N must be >= 1");
  Envelope e;
  e.value = 24.0 * std::sqrt(N * symbol_distance(exact, mera));
  e.valid = e.value < kPowersStormerLimit;
  return e;
}

}  // namespace wavemera
