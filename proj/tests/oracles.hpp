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

// Brute-force reference computations used only by the tests. They work in
// real space or by direct summation and share no code paths with the
// momentum-space routines they check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "wavemera/sequence.hpp"

namespace oracle {

using cplx = std::complex<double>;
using wavemera::ModeSeq;
inline constexpr double kPi = 3.14159265358979323846;

/// Direct evaluation of sum_n f[n] exp(-ikn) with std::polar per term.
inline cplx dtft(const ModeSeq& f, double k) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += f.values[i] * std::polar(1.0, -k * static_cast<double>(f.offset + static_cast<std::int64_t>(i)));
  return s;
}

/// Polynomial with coefficients c (lowest first) evaluated at z.
inline cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * z + *it;
  return s;
}

/// Off-diagonal entry of the level-l effective Hamiltonian at ring momentum
/// q = 2 pi m / cells, from a real-space ring of `cells` level-l cells:
/// Bloch sums of the periodized modes, the hopping (Tv)[n] = v[n-1] - v[n]
/// applied as a sparse matrix, then a plain inner product.
inline cplx ring_offdiag(const ModeSeq& f1, const ModeSeq& f2, int level, int cells, int m) {
  const std::int64_t stride = std::int64_t{1} << level;
  const std::int64_t n_sites = stride * cells;
  const double q = 2.0 * kPi * m / cells;
  const auto bloch = [&](const ModeSeq& f) {
    std::vector<cplx> u(static_cast<std::size_t>(n_sites), 0.0);
    for (std::int64_t z = 0; z < cells; ++z) {
      const cplx ph = std::polar(1.0, q * static_cast<double>(z));
      for (std::size_t i = 0; i < f.size(); ++i) {
        std::int64_t n = (f.offset + static_cast<std::int64_t>(i) + stride * z) % n_sites;
        if (n < 0) n += n_sites;
        u[static_cast<std::size_t>(n)] += ph * f.values[i];
      }
    }
    return u;
  };
  const auto u1 = bloch(f1), u2 = bloch(f2);
  cplx s = 0.0;
  for (std::int64_t n = 0; n < n_sites; ++n) {
    const std::int64_t prev = (n - 1 + n_sites) % n_sites;
    const cplx tv = u2[static_cast<std::size_t>(prev)] - u2[static_cast<std::size_t>(n)];
    s += std::conj(u1[static_cast<std::size_t>(n)]) * tv;
  }
  return s / static_cast<double>(cells);
}

/// Blocked b-space pair (u on sublattice 1, v on sublattice 2) placed on the
/// original chain with its own staggering, then <phi|H|phi> for
/// H = -sum_n (a_n^dag a_{n+1} + h.c.) accumulated from a site map.
inline double chain_energy_from_blocked(const ModeSeq& u, const ModeSeq& v) {
  std::map<std::int64_t, cplx> a;
  const auto put = [&](const ModeSeq& s, int sub) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::int64_t n = s.offset + static_cast<std::int64_t>(i);
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      a[2 * n + sub] += sign * s.values[i];
    }
  };
  put(u, 0);
  put(v, 1);
  double e = 0.0;
  for (const auto& [n, val] : a) {
    const auto it = a.find(n + 1);
    if (it != a.end()) e += -2.0 * (std::conj(val) * it->second).real();
  }
  return e;
}

/// Square-lattice energy of a blocked two-component 2D mode with
/// sublattice amplitudes A1(x, y) = u1[x] w1[y] and A2 = u2[x] w2[y],
/// placed on the original lattice via b1 -> a(x+y, x-y), b2 -> a(x+y+1,
/// x-y), both staggered by (-1)^(x+y); H = -sum_<ij> a_i^dag a_j + h.c.
inline double square_energy_from_blocked(const ModeSeq& u1, const ModeSeq& w1, double c1, const ModeSeq& u2,
                                         const ModeSeq& w2, double c2) {
  std::map<std::pair<std::int64_t, std::int64_t>, cplx> a;
  const auto put = [&](const ModeSeq& u, const ModeSeq& w, double c, int sub) {
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < w.size(); ++j) {
        const std::int64_t x = u.offset + static_cast<std::int64_t>(i);
        const std::int64_t y = w.offset + static_cast<std::int64_t>(j);
        const double sign = ((x + y) % 2 == 0) ? 1.0 : -1.0;
        a[{x + y + sub, x - y}] += c * sign * u.values[i] * w.values[j];
      }
  };
  put(u1, w1, c1, 0);
  put(u2, w2, c2, 1);
  double e = 0.0;
  for (const auto& [p, val] : a) {
    for (const auto& d : {std::pair<std::int64_t, std::int64_t>{1, 0}, {0, 1}}) {
      const auto it = a.find({p.first + d.first, p.second + d.second});
      if (it != a.end()) e += -2.0 * (std::conj(val) * it->second).real();
    }
  }
  return e;
}

/// Midpoint-rule integral of f over [a, b].
template <class F>
double quadrature(const F& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

/// sum_n a[n] conj(b[n + shift]) by explicit index loop.
inline cplx shifted_overlap(const ModeSeq& a, const ModeSeq& b, std::int64_t shift) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int64_t n = a.offset + static_cast<std::int64_t>(i) + shift - b.offset;
    if (n >= 0 && n < static_cast<std::int64_t>(b.size())) s += a.values[i] * std::conj(b.values[static_cast<std::size_t>(n)]);
  }
  return s;
}

/// Explicit von Neumann entropy of a free-fermion state restricted to a
/// region, via the Jacobi SVD of the symbol (singular values equal the
/// eigenvalues of a positive semidefinite matrix).
inline double entropy_nats(const Eigen::MatrixXcd& C) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(C);
  double s = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double v = std::min(1.0, std::max(0.0, svd.singularValues()(i)));
    if (v > 0.0 && v < 1.0) s -= v * std::log(v) + (1.0 - v) * std::log(1.0 - v);
  }
  return s;
}

}  // namespace oracle
