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

// Nearest-neighbour hopping chain H = -sum_n a_n^dag a_{n+1} + h.c. at half
// filling, and the free-fermion state prepared by the wavelet MERA.
//
// Blocking: b1[n] = (-1)^n a[2n], b2[n] = (-1)^n a[2n+1]. Sublattice 1 is
// transformed with the h filters, sublattice 2 with the g filters, and the
// level-l wavelet outputs are filled in the Hadamard |+> combination.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "wavemera/dwt.hpp"
#include "wavemera/error.hpp"
#include "wavemera/filters.hpp"
#include "wavemera/sequence.hpp"

namespace wavemera {

/// <a_x^dag a_y> in the exact ground state, as a function of r = y - x.
inline double exact_two_point(std::int64_t r) {
  if (r == 0) return 0.5;
  const double x = kPi * static_cast<double>(r);
  return std::sin(x / 2.0) / x;
}

/// Sign of the Hadamard combination: plus fills (u + v)/sqrt(2).
enum class HadamardSign { plus = 1, minus = -1 };

inline double sign_value(HadamardSign s) { return s == HadamardSign::plus ? 1.0 : -1.0; }

/// Maps a two-component blocked mode (b1, b2) to the original lattice.
inline ModeSeq unblock(const ModeSeq& b1, const ModeSeq& b2) {
  if (b1.empty() && b2.empty()) return {};
  const std::int64_t lo = std::min(b1.empty() ? b2.offset : b1.offset,
                                   b2.empty() ? b1.offset : b2.offset);
  const std::int64_t hi = std::max(b1.empty() ? b2.end() : b1.end(),
                                   b2.empty() ? b1.end() : b2.end());
  ModeSeq out(2 * lo, std::vector<cplx>(static_cast<std::size_t>(2 * (hi - lo)), 0.0));
  for (std::int64_t n = lo; n < hi; ++n) {
    const double stagger = (n % 2 == 0) ? 1.0 : -1.0;
    out.values[static_cast<std::size_t>(2 * (n - lo))] = stagger * b1[n];
    out.values[static_cast<std::size_t>(2 * (n - lo) + 1)] = stagger * b2[n];
  }
  return out;
}

/// Inverse of unblock: splits an original-lattice mode into (b1, b2).
inline std::pair<ModeSeq, ModeSeq> block(const ModeSeq& a) {
  if (a.empty()) return {};
  const auto floor_div2 = [](std::int64_t v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); };
  const std::int64_t lo = floor_div2(a.offset);
  const std::int64_t hi = floor_div2(a.end() - 1) + 1;
  ModeSeq b1(lo, std::vector<cplx>(static_cast<std::size_t>(hi - lo), 0.0));
  ModeSeq b2 = b1;
  for (std::int64_t n = lo; n < hi; ++n) {
    const double stagger = (n % 2 == 0) ? 1.0 : -1.0;
    b1.values[static_cast<std::size_t>(n - lo)] = stagger * a[2 * n];
    b2.values[static_cast<std::size_t>(n - lo)] = stagger * a[2 * n + 1];
  }
  return {b1, b2};
}

/// Level-l mode (phi^h, sign * phi^g) / sqrt(2) embedded in the original
/// lattice; its translates have stride 2^(l+1).
inline ModeSeq assemble_mode(const FilterPair& pair, int level, HadamardSign sign) {
  if (level < 1) throw PreconditionError("assemble_mode: level must be >= 1");
  const double w = 1.0 / std::sqrt(2.0);
  const ModeSeq ph = wavelet_mode(pair.h_s, pair.h_w, level);
  const ModeSeq pg = wavelet_mode(pair.g_s, pair.g_w, level);
  return unblock(w * ph, (w * sign_value(sign)) * pg);
}

/// e = -2 Re sum_n phi[n] conj(phi[n+1]).
inline double mode_energy(const ModeSeq& phi) {
  cplx s = 0.0;
  for (std::size_t i = 0; i + 1 < phi.size(); ++i) s += phi.values[i] * std::conj(phi.values[i + 1]);
  return -2.0 * s.real();
}

/// Hadamard sign whose level-1 mode has negative energy. The |+>
/// combination is the filled one for every pair built by design_pair; the
/// check guards user-supplied pairs with other phase conventions.
inline HadamardSign filled_sign(const FilterPair& pair) {
  const double e_plus = mode_energy(assemble_mode(pair, 1, HadamardSign::plus));
  return e_plus <= 0.0 ? HadamardSign::plus : HadamardSign::minus;
}

inline ModeSeq assemble_filled_mode(const FilterPair& pair, int level) {
  return assemble_mode(pair, level, filled_sign(pair));
}

/// Energy per site sum_{l=1}^{layers} 2^-(l+1) e_(l).
inline double energy_density(const FilterPair& pair, int layers) {
  if (layers < 1) throw PreconditionError("energy_density: layers must be >= 1");
  const HadamardSign sign = filled_sign(pair);
  double e = 0.0;
  for (int l = 1; l <= layers; ++l)
    e += std::ldexp(1.0, -(l + 1)) * mode_energy(assemble_mode(pair, l, sign));
  return e;
}

/// Generators of the filled modes of an L-layer MERA; level l is filled by
/// the translates of modes[l - 1] by multiples of 2^(l+1).
class FilledModeSet {
 public:
  FilledModeSet(const FilterPair& pair, int layers) : layers_(layers) {
    if (layers < 1) throw PreconditionError("FilledModeSet: layers must be >= 1");
    const HadamardSign sign = filled_sign(pair);
    modes_.reserve(static_cast<std::size_t>(layers));
    for (int l = 1; l <= layers; ++l) modes_.push_back(assemble_mode(pair, l, sign));
  }

  int layers() const noexcept { return layers_; }
  const std::vector<ModeSeq>& modes() const noexcept { return modes_; }
  const ModeSeq& mode(int level) const { return modes_.at(static_cast<std::size_t>(level - 1)); }

  /// C(x, y) = sum_l sum_z phi_l[x - 2^(l+1) z] conj(phi_l[y - 2^(l+1) z]).
  cplx two_point(std::int64_t x, std::int64_t y) const {
    cplx s = 0.0;
    for (int l = 1; l <= layers_; ++l) {
      const ModeSeq& phi = modes_[static_cast<std::size_t>(l - 1)];
      const std::int64_t stride = std::int64_t{1} << (l + 1);
      // Need x - stride z and y - stride z both inside [offset, end).
      const std::int64_t lo = std::max(x, y) - (phi.end() - 1);
      const std::int64_t hi = std::min(x, y) - phi.offset;
      if (hi < lo) continue;
      const std::int64_t z_lo = ceil_div(lo, stride);
      const std::int64_t z_hi = floor_div(hi, stride);
      for (std::int64_t z = z_lo; z <= z_hi; ++z)
        s += phi[x - stride * z] * std::conj(phi[y - stride * z]);
    }
    return s;
  }

 private:
  static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    return a >= 0 ? a / b : -((-a + b - 1) / b);
  }
  static std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

  int layers_;
  std::vector<ModeSeq> modes_;
};

inline cplx mera_two_point(const FilterPair& pair, int layers, std::int64_t x, std::int64_t y) {
  return FilledModeSet(pair, layers).two_point(x, y);
}

/// Correlation source of the exact ground state.
struct ExactGroundState {
  cplx two_point(std::int64_t x, std::int64_t y) const { return exact_two_point(y - x); }
};

/// Hermitian matrix <delta_x | symbol | delta_y> over the listed sites.
template <class Site>
struct SymbolBlock {
  std::vector<Site> sites;
  Eigen::MatrixXcd matrix;

  std::size_t size() const noexcept { return sites.size(); }

  double hermiticity_residual() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  }

  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
};

using SymbolBlock1D = SymbolBlock<std::int64_t>;

namespace detail {

template <class Site>
void require_distinct(const std::vector<Site>& sites) {
  std::set<Site> seen(sites.begin(), sites.end());
  if (seen.size() != sites.size()) throw PreconditionError("restricted_symbol: sites must be distinct");
}

}  // namespace detail

/// Symbol restricted to `sites` from any source with two_point(x, y).
template <class Source>
SymbolBlock1D restricted_symbol(const Source& source, const std::vector<std::int64_t>& sites) {
  detail::require_distinct(sites);
  SymbolBlock1D block;
  block.sites = sites;
  const auto n = static_cast<Eigen::Index>(sites.size());
  block.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const cplx c = source.two_point(sites[static_cast<std::size_t>(i)], sites[static_cast<std::size_t>(j)]);
      block.matrix(i, j) = c;
      block.matrix(j, i) = std::conj(c);
    }
  return block;
}

inline std::vector<std::int64_t> interval_sites(std::int64_t start, std::int64_t length) {
  std::vector<std::int64_t> s(static_cast<std::size_t>(length));
  std::iota(s.begin(), s.end(), start);
  return s;
}

/// Von Neumann entropy in nats from the symbol eigenvalues (clamped to [0,1]).
template <class Site>
double entanglement_entropy(const SymbolBlock<Site>& block) {
  if (block.size() == 0) return 0.0;
  const Eigen::VectorXd nu = block.eigenvalues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    const double v = std::clamp(nu(i), 0.0, 1.0);
    if (v > 0.0) s -= v * std::log(v);
    if (v < 1.0) s -= (1.0 - v) * std::log1p(-v);
  }
  return s;
}

/// det[<f_i| psi |f_{2N+1-j}>]_{i,j=1..N} for observables given as vectors
/// over block.sites:
/// <a^dag(f_1) ... a^dag(f_N) a(f_{N+1}) ... a(f_2N)>.
template <class Site>
cplx wick_correlation(const SymbolBlock<Site>& block, const std::vector<Eigen::VectorXcd>& f) {
  if (f.empty() || f.size() % 2 != 0)
    throw PreconditionError("wick_correlation: need an even, nonzero number of observables");
  const auto n = static_cast<Eigen::Index>(block.size());
  for (const auto& v : f)
    if (v.size() != n) throw PreconditionError("wick_correlation: observable not expressed over block sites");
  const std::size_t N = f.size() / 2;
  Eigen::MatrixXcd G(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          f[i].dot(block.matrix * f[2 * N - 1 - j]);  // dot conjugates the left
  return G.determinant();
}

/// Projects lattice-indexed observables onto block.sites; support outside
/// the sites is rejected.
inline std::vector<Eigen::VectorXcd> observables_on_sites(const SymbolBlock1D& block,
                                                          const std::vector<ModeSeq>& f) {
  std::map<std::int64_t, Eigen::Index> index;
  for (std::size_t i = 0; i < block.sites.size(); ++i)
    index[block.sites[i]] = static_cast<Eigen::Index>(i);
  std::vector<Eigen::VectorXcd> out;
  for (const auto& m : f) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(block.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.values[i] == 0.0) continue;
      const auto it = index.find(m.offset + static_cast<std::int64_t>(i));
      if (it == index.end())
        throw PreconditionError("wick_correlation: observable supported outside block sites");
      v(it->second) = m.values[i];
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline cplx wick_correlation(const SymbolBlock1D& block, const std::vector<ModeSeq>& f) {
  return wick_correlation(block, observables_on_sites(block, f));
}

}  // namespace wavemera
