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

// Square-lattice hopping model at half filling in blocked coordinates.
// Unit cell (x, y) holds b1 = (-1)^(x+y) a(x+y, x-y) and
// b2 = (-1)^(x+y) a(x+y+1, x-y); the hopping kernel between the two
// sublattices is T12 = -(1 - S_x)(1 - S_y).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "wavemera/dwt.hpp"
#include "wavemera/error.hpp"
#include "wavemera/fermion1d.hpp"
#include "wavemera/filters.hpp"
#include "wavemera/sequence.hpp"

namespace wavemera {

struct Mode2D {
  int level_x = 1;
  int level_y = 1;
  std::pair<ModeSeq, ModeSeq> x_modes;  // (h cascade, g cascade)
  std::pair<ModeSeq, ModeSeq> y_modes;
  HadamardSign combination = HadamardSign::plus;
  double energy = 0.0;
  double alternative_energy = 0.0;  // energy of the rejected sign

  /// Amplitude on sublattice 1 or 2 of cell (x, y).
  cplx amplitude(int sublattice, std::int64_t x, std::int64_t y) const {
    const double w = 1.0 / std::sqrt(2.0);
    if (sublattice == 1) return w * x_modes.first[x] * y_modes.first[y];
    return w * sign_value(combination) * x_modes.second[x] * y_modes.second[y];
  }

  double norm_squared() const {
    return 0.5 * (x_modes.first.norm_squared() * y_modes.first.norm_squared() +
                  x_modes.second.norm_squared() * y_modes.second.norm_squared());
  }

  /// Fourier transform of one sublattice component.
  cplx dtft(int sublattice, double kx, double ky) const {
    const double w = 1.0 / std::sqrt(2.0);
    if (sublattice == 1) return w * x_modes.first.dtft(kx) * y_modes.first.dtft(ky);
    return w * sign_value(combination) * x_modes.second.dtft(kx) * y_modes.second.dtft(ky);
  }
};

/// <u | (1 - S) | v> with (1 - S)v[n] = v[n] - v[n-1].
inline cplx difference_overlap(const ModeSeq& u, const ModeSeq& v) {
  return inner(u, v) - inner(u, v.shifted(1));
}

/// Energy of the mode with the given sign, from the separable factors.
inline double mode2d_energy(const Mode2D& m) {
  const cplx fx = difference_overlap(m.x_modes.first, m.x_modes.second);
  const cplx fy = difference_overlap(m.y_modes.first, m.y_modes.second);
  // 2 Re <c1| T12 |c2> with c1, c2 carrying weight 1/sqrt(2) each.
  return -sign_value(m.combination) * (fx * fy).real();
}

inline Mode2D mode2d(const FilterPair& pair, int lx, int ly) {
  if (lx < 1 || ly < 1) throw PreconditionError("mode2d: levels must be >= 1");
  Mode2D m;
  m.level_x = lx;
  m.level_y = ly;
  m.x_modes = {wavelet_mode(pair.h_s, pair.h_w, lx), wavelet_mode(pair.g_s, pair.g_w, lx)};
  m.y_modes = {wavelet_mode(pair.h_s, pair.h_w, ly), wavelet_mode(pair.g_s, pair.g_w, ly)};
  m.combination = HadamardSign::plus;
  const double e_plus = mode2d_energy(m);
  m.energy = e_plus;
  m.alternative_energy = -e_plus;
  if (e_plus > 0.0) {
    m.combination = HadamardSign::minus;
    std::swap(m.energy, m.alternative_energy);
  }
  return m;
}

/// sum_{lx<=Lx, ly<=Ly} 2^-(lx+ly+1) e(lx, ly).
inline double energy_density_2d(const FilterPair& pair, int Lx, int Ly) {
  if (Lx < 1 || Ly < 1) throw PreconditionError("energy_density_2d: depths must be >= 1");
  double e = 0.0;
  for (int lx = 1; lx <= Lx; ++lx)
    for (int ly = 1; ly <= Ly; ++ly) e += std::ldexp(mode2d(pair, lx, ly).energy, -(lx + ly + 1));
  return e;
}

/// Sign choices per branch, for audit output.
inline std::vector<std::tuple<int, int, HadamardSign>> branch_signs(const FilterPair& pair, int Lx, int Ly) {
  std::vector<std::tuple<int, int, HadamardSign>> out;
  for (int lx = 1; lx <= Lx; ++lx)
    for (int ly = 1; ly <= Ly; ++ly) out.emplace_back(lx, ly, mode2d(pair, lx, ly).combination);
  return out;
}

struct Site2D {
  int sublattice = 1;  // 1 or 2
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend auto operator<=>(const Site2D&, const Site2D&) = default;
};

using SymbolBlock2D = SymbolBlock<Site2D>;

/// Both sublattices of the cells [x0, x0+R) x [y0, y0+R), ordered by
/// (y, x, sublattice).
inline std::vector<Site2D> box_sites(std::int64_t R, std::int64_t x0 = 0, std::int64_t y0 = 0) {
  std::vector<Site2D> s;
  s.reserve(static_cast<std::size_t>(2 * R * R));
  for (std::int64_t y = 0; y < R; ++y)
    for (std::int64_t x = 0; x < R; ++x)
      for (int sub : {1, 2}) s.push_back({sub, x0 + x, y0 + y});
  return s;
}

inline constexpr std::int64_t kMaxBox2D = 48;

namespace detail {

/// X[i][j] = sum_z u[c_i - 2^l z] conj(v[c_j - 2^l z]) for coordinates c.
inline Eigen::MatrixXcd stride_overlaps(const ModeSeq& u, const ModeSeq& v, int level,
                                        const std::vector<std::int64_t>& coords) {
  const std::int64_t stride = std::int64_t{1} << level;
  const auto n = static_cast<Eigen::Index>(coords.size());
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n, n);
  if (u.empty() || v.empty()) return X;
  const auto floor_div = [](std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::int64_t ci = coords[static_cast<std::size_t>(i)], cj = coords[static_cast<std::size_t>(j)];
      const std::int64_t lo = std::max(ci - (u.end() - 1), cj - (v.end() - 1));
      const std::int64_t hi = std::min(ci - u.offset, cj - v.offset);
      if (hi < lo) continue;
      cplx s = 0.0;
      for (std::int64_t z = -floor_div(-lo, stride); z <= floor_div(hi, stride); ++z)
        s += u[ci - stride * z] * std::conj(v[cj - stride * z]);
      X(i, j) = s;
    }
  return X;
}

}  // namespace detail

/// Two-point function of the branching MERA with depths (Lx, Ly)
/// restricted to `sites`; each branch contributes a product of 1D
/// stride-2^l overlap factors.
inline SymbolBlock2D restricted_symbol_2d(const FilterPair& pair, int Lx, int Ly,
                                          const std::vector<Site2D>& sites) {
  if (Lx < 1 || Ly < 1) throw PreconditionError("restricted_symbol_2d: depths must be >= 1");
  detail::require_distinct(sites);
  std::map<std::int64_t, Eigen::Index> xi, yi;
  for (const auto& s : sites) {
    if (s.sublattice != 1 && s.sublattice != 2)
      throw PreconditionError("restricted_symbol_2d: sublattice must be 1 or 2");
    xi.emplace(s.x, 0);
    yi.emplace(s.y, 0);
  }
  if (static_cast<std::int64_t>(xi.size()) > kMaxBox2D || static_cast<std::int64_t>(yi.size()) > kMaxBox2D)
    throw PreconditionError("restricted_symbol_2d: box exceeds 48 cells per side");
  std::vector<std::int64_t> xs, ys;
  for (auto& [c, idx] : xi) {
    idx = static_cast<Eigen::Index>(xs.size());
    xs.push_back(c);
  }
  for (auto& [c, idx] : yi) {
    idx = static_cast<Eigen::Index>(ys.size());
    ys.push_back(c);
  }

  // Per level and sublattice pair (a, b): 1D overlap factors in x and y.
  const int Lmax = std::max(Lx, Ly);
  std::vector<std::array<Eigen::MatrixXcd, 4>> X(static_cast<std::size_t>(Lx + 1)),
      Y(static_cast<std::size_t>(Ly + 1));
  for (int l = 1; l <= Lmax; ++l) {
    const std::array<ModeSeq, 2> m = {wavelet_mode(pair.h_s, pair.h_w, l), wavelet_mode(pair.g_s, pair.g_w, l)};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        if (l <= Lx) X[static_cast<std::size_t>(l)][static_cast<std::size_t>(2 * a + b)] =
            detail::stride_overlaps(m[static_cast<std::size_t>(a)], m[static_cast<std::size_t>(b)], l, xs);
        if (l <= Ly) Y[static_cast<std::size_t>(l)][static_cast<std::size_t>(2 * a + b)] =
            detail::stride_overlaps(m[static_cast<std::size_t>(a)], m[static_cast<std::size_t>(b)], l, ys);
      }
  }

  std::vector<std::vector<bool>> plus(static_cast<std::size_t>(Lx + 1),
                                      std::vector<bool>(static_cast<std::size_t>(Ly + 1), true));
  for (const auto& [lx, ly, sign] : branch_signs(pair, Lx, Ly))
    plus[static_cast<std::size_t>(lx)][static_cast<std::size_t>(ly)] = sign == HadamardSign::plus;

  // Diagonal sublattice blocks carry weight 1/2, off-diagonal ones s/2.
  // Group the y factors by branch sign so each lx needs two products.
  std::vector<std::array<Eigen::MatrixXcd, 4>> Yplus(static_cast<std::size_t>(Lx + 1)),
      Yminus(static_cast<std::size_t>(Lx + 1));
  for (int lx = 1; lx <= Lx; ++lx)
    for (int p = 0; p < 4; ++p) {
      Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ys.size()), static_cast<Eigen::Index>(ys.size()));
      Eigen::MatrixXcd sm = sp;
      for (int ly = 1; ly <= Ly; ++ly) {
        (plus[static_cast<std::size_t>(lx)][static_cast<std::size_t>(ly)] ? sp : sm) += Y[static_cast<std::size_t>(ly)][static_cast<std::size_t>(p)];
      }
      Yplus[static_cast<std::size_t>(lx)][static_cast<std::size_t>(p)] = sp;
      Yminus[static_cast<std::size_t>(lx)][static_cast<std::size_t>(p)] = sm;
    }

  SymbolBlock2D block;
  block.sites = sites;
  const auto n = static_cast<Eigen::Index>(sites.size());
  block.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Site2D& si = sites[static_cast<std::size_t>(i)];
    const Eigen::Index xa = xi[si.x], ya = yi[si.y];
    for (Eigen::Index j = i; j < n; ++j) {
      const Site2D& sj = sites[static_cast<std::size_t>(j)];
      const Eigen::Index xb = xi[sj.x], yb = yi[sj.y];
      const int p = 2 * (si.sublattice - 1) + (sj.sublattice - 1);
      const double off = (si.sublattice == sj.sublattice) ? 1.0 : -1.0;
      cplx c = 0.0;
      for (int lx = 1; lx <= Lx; ++lx) {
        const auto ul = static_cast<std::size_t>(lx);
        const auto up = static_cast<std::size_t>(p);
        c += X[ul][up](xa, xb) * (Yplus[ul][up](ya, yb) + off * Yminus[ul][up](ya, yb));
      }
      c *= 0.5;
      block.matrix(i, j) = c;
      block.matrix(j, i) = std::conj(c);
    }
  }
  return block;
}

inline SymbolBlock2D box_symbol_2d(const FilterPair& pair, int Lx, int Ly, std::int64_t R) {
  if (R < 1 || R > kMaxBox2D) throw PreconditionError("box_symbol_2d: R must lie in [1, 48]");
  return restricted_symbol_2d(pair, Lx, Ly, box_sites(R));
}

/// Original-lattice coordinates and staggering sign of a blocked site.
struct LatticeSite {
  std::int64_t X = 0;
  std::int64_t Y = 0;
  double sign = 1.0;
};

inline LatticeSite unblock_2d(const Site2D& s) {
  const double sign = ((s.x + s.y) % 2 == 0) ? 1.0 : -1.0;
  return {s.x + s.y + (s.sublattice == 2 ? 1 : 0), s.x - s.y, sign};
}

}  // namespace wavemera
