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

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wavemera/error.hpp"
#include "wavemera/filters.hpp"
#include "wavemera/sequence.hpp"

namespace wavemera {

/// Output of a transform truncated after `levels` steps.
struct WaveletCoeffs {
  int levels = 0;
  std::vector<ModeSeq> wavelet;  // wavelet[l - 1] holds level l
  ModeSeq scaling;               // residual after the last level

  double norm_squared() const {
    double s = scaling.norm_squared();
    for (const auto& w : wavelet) s += w.norm_squared();
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }
};

/// One analysis step: out[n] = sum_m conj(h[m - 2n]) x[m].
inline ModeSeq analysis_step(const ModeSeq& x, const ModeSeq& h) {
  if (x.empty() || h.empty()) return {};
  const auto floor_div2 = [](std::int64_t a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); };
  const std::int64_t hi_h = h.end() - 1;
  // m - 2n in [h.offset, hi_h] with m in [x.offset, x.end() - 1].
  const std::int64_t n_lo = -floor_div2(hi_h - x.offset);
  const std::int64_t n_hi = floor_div2(x.end() - 1 - h.offset);
  if (n_hi < n_lo) return {};
  ModeSeq out(n_lo, std::vector<cplx>(static_cast<std::size_t>(n_hi - n_lo + 1), 0.0));
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const std::int64_t m = h.offset + static_cast<std::int64_t>(j) + 2 * n;
      const cplx xm = x[m];
      if (xm != 0.0) acc += std::conj(h.values[j]) * xm;
    }
    out.values[static_cast<std::size_t>(n - n_lo)] = acc;
  }
  return out;
}

/// Upsampling delta_n -> delta_{2n}.
inline ModeSeq upsample(const ModeSeq& f) {
  if (f.empty()) return {};
  ModeSeq out(2 * f.offset, std::vector<cplx>(2 * f.size() - 1, 0.0));
  for (std::size_t i = 0; i < f.size(); ++i) out.values[2 * i] = f.values[i];
  return out;
}

/// One synthesis step: x[m] = sum_n h_s[m - 2n] s[n] + h_w[m - 2n] w[n].
inline ModeSeq synthesis_step(const ModeSeq& s, const ModeSeq& w, const ModeSeq& h_s,
                              const ModeSeq& h_w) {
  return convolve(h_s, upsample(s)) + convolve(h_w, upsample(w));
}

inline WaveletCoeffs analyze(const ModeSeq& signal, const ModeSeq& h_s, const ModeSeq& h_w,
                             int levels) {
  if (levels < 1) throw PreconditionError("analyze: levels must be >= 1");
  WaveletCoeffs out;
  out.levels = levels;
  ModeSeq current = signal;
  for (int l = 0; l < levels; ++l) {
    out.wavelet.push_back(analysis_step(current, h_w));
    current = analysis_step(current, h_s);
  }
  out.scaling = std::move(current);
  return out;
}

inline ModeSeq synthesize(const WaveletCoeffs& coeffs, const ModeSeq& h_s, const ModeSeq& h_w) {
  ModeSeq current = coeffs.scaling;
  for (int l = coeffs.levels; l >= 1; --l)
    current = synthesis_step(current, coeffs.wavelet[static_cast<std::size_t>(l - 1)], h_s, h_w);
  return current;
}

/// [m(h_s) up]^(level-1) m(h_w) up applied to delta_0: the level-l wavelet
/// mode generated by the inverse transform.
inline ModeSeq wavelet_mode(const ModeSeq& h_s, const ModeSeq& h_w, int level) {
  if (level < 1) throw PreconditionError("wavelet_mode: level must be >= 1");
  ModeSeq v = h_w;
  for (int l = 1; l < level; ++l) v = convolve(h_s, upsample(v));
  return v;
}

/// [m(h_s) up]^level applied to delta_0 (level 0 is delta_0 itself).
inline ModeSeq scaling_mode(const ModeSeq& h_s, int level) {
  if (level < 0) throw PreconditionError("scaling_mode: level must be >= 0");
  ModeSeq v = ModeSeq::delta(0);
  for (int l = 0; l < level; ++l) v = convolve(h_s, upsample(v));
  return v;
}

// ---------------------------------------------------------------------------
// Circuit factorization

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

using Gate = std::array<std::array<double, 2>, 2>;

struct GateLayer {
  Parity parity = Parity::even;
  Gate gate{};
};

inline constexpr const char* kPhaseStageDescription =
    "stagger b1[n] = (-1)^n a[2n], b2[n] = (-1)^n a[2n+1]; sublattice 1 carries the h filters, "
    "sublattice 2 the g filters; after each layer a Hadamard couples (b1, b2) and the |+> "
    "combination of the wavelet outputs is filled";

/// Nearest-neighbour gate layers of one transform step, in application order.
///
/// The polyphase matrix P(z) = [[h_s^even, h_w^even], [h_s^odd, h_w^odd]]
/// factors as G_{d-1} Lambda(z) ... Lambda(z) G_0 diag(z^a, z^b) with
/// Lambda(z) = diag(1, z); layers[i] holds G_i. The column shifts a, b are
/// stored so the filters can be rebuilt at their original offsets.
struct CircuitSpec {
  int depth = 0;
  std::vector<GateLayer> layers;
  std::string phase_stage = kPhaseStageDescription;
  std::int64_t scaling_shift = 0;
  std::int64_t wavelet_shift = 0;
};

namespace detail {

// 2x2 matrix of real polynomials in z, coefficients indexed by exponent
// 0..span.
struct PolyMatrix {
  std::vector<std::array<std::array<double, 2>, 2>> c;

  int span() const { return static_cast<int>(c.size()) - 1; }
};

inline double gate_orthogonality(const Gate& g) {
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k) s += g[k][i] * g[k][j];
      r = std::max(r, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return r;
}

}  // namespace detail

/// Largest orthogonality residual over all gates.
inline double circuit_orthogonality(const CircuitSpec& c) {
  double r = 0.0;
  for (const auto& l : c.layers) r = std::max(r, detail::gate_orthogonality(l.gate));
  return r;
}

/// Lattice factorization of the orthonormal filter pair (h_s, h_w) into
/// layers of identical 2x2 orthogonal gates. Rotations are extracted from
/// the highest polyphase degree down; angles lie in (-pi/2, pi/2].
inline CircuitSpec factor_circuit(const ModeSeq& h_s, const ModeSeq& h_w, double tol = 1e-10) {
  if (h_s.empty() || h_w.empty()) throw PreconditionError("factor_circuit: empty filter");
  if (std::max(h_s.max_imag(), h_w.max_imag()) > 1e-12)
    throw PreconditionError("factor_circuit: filters must be real");

  const auto floor_div2 = [](std::int64_t a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); };
  const std::int64_t shift_s = floor_div2(h_s.offset);
  const std::int64_t shift_w = floor_div2(h_w.offset);
  const std::int64_t span_s = floor_div2(h_s.end() - 1) - shift_s;
  const std::int64_t span_w = floor_div2(h_w.end() - 1) - shift_w;
  const std::int64_t span = std::max(span_s, span_w);

  detail::PolyMatrix P;
  P.c.assign(static_cast<std::size_t>(span + 1), {});
  for (std::int64_t j = 0; j <= span; ++j) {
    for (int p = 0; p < 2; ++p) {
      P.c[static_cast<std::size_t>(j)][p][0] = h_s[2 * (j + shift_s) + p].real();
      P.c[static_cast<std::size_t>(j)][p][1] = h_w[2 * (j + shift_w) + p].real();
    }
  }

  CircuitSpec out;
  out.scaling_shift = shift_s;
  out.wavelet_shift = shift_w;
  std::vector<Gate> peeled;  // G_{d-1}, G_{d-2}, ... in peel order
  double residual = 0.0;
  while (P.span() > 0) {
    const auto& lo = P.c.front();
    const auto& hi = P.c.back();
    auto fro = [](const std::array<std::array<double, 2>, 2>& m) {
      return std::hypot(std::hypot(m[0][0], m[0][1]), std::hypot(m[1][0], m[1][1]));
    };
    // Direction of the dominant column of a 2x2 matrix.
    auto dominant = [](const std::array<std::array<double, 2>, 2>& m) {
      const double n0 = std::hypot(m[0][0], m[1][0]);
      const double n1 = std::hypot(m[0][1], m[1][1]);
      const int col = n0 >= n1 ? 0 : 1;
      const double n = std::max(n0, n1);
      return std::array<double, 2>{m[0][col] / n, m[1][col] / n};
    };
    // g0 spans range(lo) and annihilates hi; g1 = rot90(g0) spans range(hi).
    std::array<double, 2> g0;
    if (fro(lo) >= fro(hi)) {
      g0 = dominant(lo);
    } else {
      const auto g1 = dominant(hi);
      g0 = {g1[1], -g1[0]};
    }
    double c = g0[0], s = g0[1];
    double theta = std::atan2(s, c);
    if (theta <= -kPi / 2 || theta > kPi / 2) {
      c = -c;
      s = -s;
    }
    const Gate G{{{c, -s}, {s, c}}};
    // P' rows: row0 = g0^T P (drop top), row1 = g1^T P / z (drop bottom).
    detail::PolyMatrix next;
    next.c.assign(P.c.size() - 1, {});
    for (std::size_t j = 0; j < P.c.size(); ++j) {
      for (int col = 0; col < 2; ++col) {
        const double r0 = c * P.c[j][0][col] + s * P.c[j][1][col];
        const double r1 = -s * P.c[j][0][col] + c * P.c[j][1][col];
        if (j + 1 < P.c.size())
          next.c[j][0][col] = r0;
        else
          residual = std::max(residual, std::abs(r0));
        if (j > 0)
          next.c[j - 1][1][col] = r1;
        else
          residual = std::max(residual, std::abs(r1));
      }
    }
    peeled.push_back(G);
    P = std::move(next);
  }
  const Gate last{{{P.c[0][0][0], P.c[0][0][1]}, {P.c[0][1][0], P.c[0][1][1]}}};
  residual = std::max(residual, detail::gate_orthogonality(last));
  if (residual > tol)
    throw NumericalError("factor_circuit: polyphase matrix is not paraunitary", residual);

  out.layers.push_back({Parity::even, last});
  for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
    const Parity p = out.layers.size() % 2 == 0 ? Parity::even : Parity::odd;
    out.layers.push_back({p, *it});
  }
  out.depth = static_cast<int>(out.layers.size());
  return out;
}

inline CircuitSpec factor_circuit(const FilterPair& pair, bool g_branch = false) {
  return g_branch ? factor_circuit(pair.g_s, pair.g_w) : factor_circuit(pair.h_s, pair.h_w);
}

/// Multiplies the gate layers back into (h_s, h_w).
inline std::pair<ModeSeq, ModeSeq> recompose_circuit(const CircuitSpec& circuit) {
  if (circuit.layers.empty()) throw PreconditionError("recompose_circuit: no layers");
  detail::PolyMatrix P;
  P.c.push_back(circuit.layers.front().gate);
  for (std::size_t i = 1; i < circuit.layers.size(); ++i) {
    const Gate& G = circuit.layers[i].gate;
    // P <- G Lambda(z) P
    detail::PolyMatrix next;
    next.c.assign(P.c.size() + 1, {});
    for (std::size_t j = 0; j < P.c.size(); ++j) {
      for (int col = 0; col < 2; ++col) {
        const double r0 = P.c[j][0][col];
        const double r1 = P.c[j][1][col];  // multiplied by z
        next.c[j][0][col] += G[0][0] * r0;
        next.c[j][1][col] += G[1][0] * r0;
        next.c[j + 1][0][col] += G[0][1] * r1;
        next.c[j + 1][1][col] += G[1][1] * r1;
      }
    }
    P = std::move(next);
  }
  const std::size_t len = 2 * P.c.size();
  ModeSeq h_s(2 * circuit.scaling_shift, std::vector<cplx>(len, 0.0));
  ModeSeq h_w(2 * circuit.wavelet_shift, std::vector<cplx>(len, 0.0));
  for (std::size_t j = 0; j < P.c.size(); ++j)
    for (int p = 0; p < 2; ++p) {
      h_s.values[2 * j + static_cast<std::size_t>(p)] = P.c[j][p][0];
      h_w.values[2 * j + static_cast<std::size_t>(p)] = P.c[j][p][1];
    }
  return {h_s.trimmed(), h_w.trimmed()};
}

}  // namespace wavemera
