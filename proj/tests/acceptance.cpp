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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "oracles.hpp"
#include "wavemera/wavemera.hpp"

using namespace wavemera;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const FilterPair& pair_kl(int K, int L) {
  static std::map<std::pair<int, int>, FilterPair> cache;
  auto it = cache.find({K, L});
  if (it == cache.end()) it = cache.emplace(std::pair{K, L}, design_pair(K, L)).first;
  return it->second;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double wrap(double k) {
  while (k > oracle::kPi) k -= 2 * oracle::kPi;
  while (k <= -oracle::kPi) k += 2 * oracle::kPi;
  return k;
}

Outcome filters_correct() {
  double ortho = 0, moments = 0, mag = 0;
  bool lengths = true;
  for (int K = 1; K <= 4; ++K)
    for (int L = 1; L <= 4; ++L) {
      const FilterPair& p = pair_kl(K, L);
      const PairDiagnostics d = diagnose(p);
      lengths = lengths && p.M == 2 * (K + L) && p.h_s.size() == static_cast<std::size_t>(p.M) &&
                p.g_s.size() == static_cast<std::size_t>(p.M);
      ortho = std::max(ortho, d.orthonormality);
      moments = std::max(moments, d.moments);
      mag = std::max(mag, d.magnitude);
    }
  return {lengths && ortho < 1e-10 && moments < 1e-7 && mag < 1e-8,
          "orthonormality " + fmt("%.2e", ortho) + ", moments " + fmt("%.2e", moments) + ", magnitude " +
              fmt("%.2e", mag)};
}

Outcome epsilon_trend() {
  bool monotone = true;
  for (int K = 2; K <= 4; ++K)
    for (int L = 2; L <= 4; ++L) monotone = monotone && pair_kl(K, L).epsilon < pair_kl(K, L - 1).epsilon;
  std::vector<double> x, y;
  for (int n = 1; n <= 4; ++n) {
    x.push_back(2.0 * n);
    y.push_back(std::log(pair_kl(n, n).epsilon));
  }
  const double s = slope(x, y);
  return {monotone && s < 0.0, std::string("monotone in L: ") + (monotone ? "yes" : "no") + ", diagonal log-slope " +
                                   fmt("%.4f", s)};
}

Outcome energy_1d() {
  const double exact = -2.0 / oracle::kPi;
  std::vector<double> err;
  for (int n = 1; n <= 3; ++n) err.push_back(std::abs((energy_density(pair_kl(n, n), 16) - exact) / exact));
  const bool ok = err[1] < err[0] && err[2] < err[1] && err[2] * 10.0 <= err[0];
  return {ok, "relative errors " + fmt("%.3e", err[0]) + ", " + fmt("%.3e", err[1]) + ", " + fmt("%.3e", err[2])};
}

Outcome energy_2d() {
  const double exact = -8.0 / (oracle::kPi * oracle::kPi);
  std::vector<double> err;
  for (int n = 1; n <= 3; ++n) err.push_back(std::abs((energy_density_2d(pair_kl(n, n), 10, 10) - exact) / exact));
  return {err[1] < err[0] && err[2] < err[1],
          "relative errors " + fmt("%.3e", err[0]) + ", " + fmt("%.3e", err[1]) + ", " + fmt("%.3e", err[2])};
}

double translation_deviation(const FilledModeSet& m, int r) {
  const cplx ref = m.two_point(0, r);
  double d = 0.0;
  for (int x = 0; x < 32; ++x) d = std::max(d, std::abs(m.two_point(x, x + r) - ref));
  return d;
}

Outcome two_point() {
  const FilledModeSet m3(pair_kl(3, 3), 14), m1(pair_kl(1, 1), 14);
  double worst = 0.0;
  for (int r = -32; r <= 32; ++r) {
    const double exact = r == 0 ? 0.5 : std::sin(oracle::kPi * r / 2) / (oracle::kPi * r);
    worst = std::max(worst, std::abs(m3.two_point(0, r) - exact));
  }
  const double d3 = translation_deviation(m3, 1), d1 = translation_deviation(m1, 1);
  return {worst < 0.05 && d3 < d1, "max error " + fmt("%.3e", worst) + ", translation deviation K=L=3 " +
                                       fmt("%.3e", d3) + " vs K=L=1 " + fmt("%.3e", d1)};
}

Outcome bound_dominance() {
  const int trials = 20;
  int runs = 0, violations = 0, gap_violations = 0;
  double worst_ratio = 0.0;
  std::uint64_t seed = 1;
  for (int K = 1; K <= 3; ++K)
    for (int L = 1; L <= 3; ++L)
      for (int layers : {6, 10, 14}) {
        const FilledModeSet modes(pair_kl(K, L), layers);
        for (int t = 0; t < trials; ++t, ++seed) {
          std::mt19937_64 rng(seed);
          const auto f = random_observables(rng, {2, 6, 64});
          const BoundReport r = verify_correlation_bound(pair_kl(K, L), modes, f);
          const GapReport g = single_particle_gap(pair_kl(K, L), modes, detail::support_sites(f));
          ++runs;
          if (!r.satisfied) ++violations;
          if (!g.ok) ++gap_violations;
          worst_ratio = std::max(worst_ratio, r.measured / r.bound);
        }
      }
  return {runs >= 450 && violations == 0 && gap_violations == 0,
          std::to_string(runs) + " runs, " + std::to_string(violations) + " bound violations, " +
              std::to_string(gap_violations) + " gap violations, worst measured/bound " + fmt("%.3e", worst_ratio)};
}

Outcome fixed_point() {
  const FilterPair& p = pair_kl(3, 3);
  const double ratio = fixed_point_ratio(renormalized_dispersion(p, 6), renormalized_dispersion(p, 5));
  const FilterPair& q = pair_kl(2, 2);
  double oracle_err = 0.0;
  for (int l : {1, 2, 3}) {
    const ModeSeq sh = scaling_mode(q.h_s, l), sg = scaling_mode(q.g_s, l);
    const ModeSeq wh = wavelet_mode(q.h_s, q.h_w, l), wg = wavelet_mode(q.g_s, q.g_w, l);
    for (int m : {1, 50, 99, 128, 200}) {
      const double k = wrap(2 * oracle::kPi * m / 256);
      oracle_err = std::max(oracle_err, std::abs(scaling_offdiag(q, l, k) - oracle::ring_offdiag(sh, sg, l, 256, m)));
      oracle_err = std::max(oracle_err, std::abs(wavelet_offdiag(q, l, k) - oracle::ring_offdiag(wh, wg, l, 256, m)));
    }
  }
  return {ratio < 0.02 && oracle_err < 1e-8,
          "fixed-point ratio " + fmt("%.3e", ratio) + ", ring oracle deviation " + fmt("%.2e", oracle_err)};
}

Outcome entropy_scaling() {
  const double s32 = entanglement_entropy(restricted_symbol(ExactGroundState{}, interval_sites(0, 32)));
  const double s64 = entanglement_entropy(restricted_symbol(ExactGroundState{}, interval_sites(0, 64)));
  const double target = std::log(2.0) / 3.0;
  const double rel = std::abs((s64 - s32) - target) / target;
  const FilterPair& p = pair_kl(2, 2);
  std::vector<double> x, y;
  for (int R : {8, 16, 32}) {
    x.push_back(std::log2(static_cast<double>(R)));
    y.push_back(entanglement_entropy(box_symbol_2d(p, 8, 8, R)) / R);
  }
  const double s = slope(x, y);
  return {rel < 0.15 && s > 0.0, "1D relative deviation " + fmt("%.3e", rel) + ", 2D S/R slope " + fmt("%.4f", s) +
                                     " (S/R = " + fmt("%.4f", y[0]) + ", " + fmt("%.4f", y[1]) + ", " +
                                     fmt("%.4f", y[2]) + ")"};
}

Outcome circuits() {
  bool depth = true;
  double err = 0.0;
  for (int K = 1; K <= 4; ++K)
    for (int L = 0; L <= 4; ++L) {
      const FilterPair& p = pair_kl(K, L);
      for (bool g : {false, true}) {
        const CircuitSpec c = factor_circuit(p, g);
        depth = depth && c.depth == K + L && static_cast<int>(c.layers.size()) == K + L;
        const auto [s, w] = recompose_circuit(c);
        err = std::max({err, max_abs_diff(s, g ? p.g_s : p.h_s), max_abs_diff(w, g ? p.g_w : p.h_w)});
      }
    }
  return {depth && err < 1e-10, std::string("depth K+L: ") + (depth ? "yes" : "no") + ", recomposition error " +
                                    fmt("%.2e", err)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"filter correctness", 5, filters_correct},   {"epsilon trend", 5, epsilon_trend},
      {"1D energy density", 30, energy_1d},         {"2D energy density", 120, energy_2d},
      {"two-point function", 60, two_point},        {"correlation bound dominance", 300, bound_dominance},
      {"renormalization fixed point", 60, fixed_point}, {"entropy scaling", 300, entropy_scaling},
      {"circuit factorization", 5, circuits},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs < criteria[i].budget_s;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s criterion %zu: %s; %s; %.2f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), secs, criteria[i].budget_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
