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

// Exact-degree Laurent polynomials p(z) = sum_j c_j z^(min_degree + j).
//
// The variable z is the unit delay: evaluating at momentum k substitutes
// z = exp(-ik), so the coefficient list of a filter is literally its
// impulse response and lp_eval is its DTFT.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "wavemera/error.hpp"
#include "wavemera/sequence.hpp"

namespace wavemera {

class LaurentPoly {
 public:
  LaurentPoly() = default;

  LaurentPoly(std::int64_t min_degree, std::vector<cplx> coeffs)
      : min_degree_(min_degree), coeffs_(std::move(coeffs)) {
    normalize();
  }

  LaurentPoly(std::int64_t min_degree, std::initializer_list<double> coeffs)
      : LaurentPoly(min_degree, std::vector<cplx>(coeffs.begin(), coeffs.end())) {}

  static LaurentPoly constant(cplx c) { return LaurentPoly(0, std::vector<cplx>{c}); }
  static LaurentPoly monomial(std::int64_t degree, cplx c = 1.0) {
    return LaurentPoly(degree, std::vector<cplx>{c});
  }

  explicit LaurentPoly(const ModeSeq& s) : LaurentPoly(s.offset, s.values) {}
  ModeSeq to_sequence() const { return ModeSeq(min_degree_, coeffs_); }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::int64_t min_degree() const noexcept { return min_degree_; }
  std::int64_t max_degree() const noexcept {
    return min_degree_ + static_cast<std::int64_t>(coeffs_.size()) - 1;
  }
  /// max_degree - min_degree; -1 for the zero polynomial.
  std::int64_t span() const noexcept { return static_cast<std::int64_t>(coeffs_.size()) - 1; }

  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient of z^degree (zero outside the stored range).
  cplx coeff(std::int64_t degree) const noexcept {
    const std::int64_t i = degree - min_degree_;
    if (i < 0 || i >= static_cast<std::int64_t>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<std::size_t>(i)];
  }

  double max_imag() const noexcept {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c.imag()));
    return m;
  }

 private:
  void normalize() {
    std::size_t lo = 0, hi = coeffs_.size();
    while (lo < hi && std::abs(coeffs_[lo]) < kTrimThreshold) ++lo;
    while (hi > lo && std::abs(coeffs_[hi - 1]) < kTrimThreshold) --hi;
    if (lo == hi) {
      coeffs_.clear();
      min_degree_ = 0;
      return;
    }
    coeffs_ = std::vector<cplx>(coeffs_.begin() + static_cast<std::ptrdiff_t>(lo),
                                coeffs_.begin() + static_cast<std::ptrdiff_t>(hi));
    min_degree_ += static_cast<std::int64_t>(lo);
  }

  std::int64_t min_degree_ = 0;
  std::vector<cplx> coeffs_;
};

inline LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> out(a.coeffs().size() + b.coeffs().size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j)
      out[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return LaurentPoly(a.min_degree() + b.min_degree(), std::move(out));
}

inline LaurentPoly lp_add(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t lo = std::min(a.min_degree(), b.min_degree());
  const std::int64_t hi = std::max(a.max_degree(), b.max_degree());
  std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t d = lo; d <= hi; ++d)
    out[static_cast<std::size_t>(d - lo)] = a.coeff(d) + b.coeff(d);
  return LaurentPoly(lo, std::move(out));
}

inline LaurentPoly lp_scale(const LaurentPoly& a, cplx s) {
  std::vector<cplx> out = a.coeffs();
  for (auto& c : out) c *= s;
  return LaurentPoly(a.min_degree(), std::move(out));
}

inline LaurentPoly lp_pow(const LaurentPoly& a, int n) {
  LaurentPoly out = LaurentPoly::constant(1.0);
  for (int i = 0; i < n; ++i) out = lp_mul(out, a);
  return out;
}

/// p~(z) = conj(p(1/conj z)): coefficients reversed and conjugated.
inline LaurentPoly lp_paraconjugate(const LaurentPoly& p) {
  if (p.is_zero()) return {};
  std::vector<cplx> out(p.coeffs().rbegin(), p.coeffs().rend());
  for (auto& c : out) c = std::conj(c);
  return LaurentPoly(-p.max_degree(), std::move(out));
}

/// Returns sum_j c_j exp(-ik (min_degree + j)).
inline cplx lp_eval(const LaurentPoly& p, double k) {
  return p.to_sequence().dtft(k);
}

/// Evaluates at an arbitrary complex point z.
inline cplx lp_eval_at(const LaurentPoly& p, cplx z) {
  if (p.is_zero()) return 0.0;
  cplx acc = 0.0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, static_cast<double>(p.min_degree()));
}

struct Root {
  cplx value;
  int multiplicity = 1;
};

namespace detail {

struct AberthResult {
  std::vector<cplx> roots;
  int iterations = 0;
  bool converged = false;
};

// p(z) and p'(z) for an ordinary polynomial with coefficients a[0..n].
inline void horner_with_derivative(const std::vector<cplx>& a, cplx z, cplx& p, cplx& dp) {
  p = a.back();
  dp = 0.0;
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[i];
  }
}

// Newton correction p/p' evaluated stably: for |z| > 1 use the reversed
// polynomial so that Horner does not overflow or lose digits.
inline cplx newton_ratio(const std::vector<cplx>& a, cplx z) {
  const std::size_t n = a.size() - 1;
  if (std::abs(z) <= 1.0) {
    cplx p, dp;
    horner_with_derivative(a, z, p, dp);
    if (dp == 0.0) return 0.0;
    return p / dp;
  }
  // p(z) = z^n q(1/z) with q the reversed polynomial.
  std::vector<cplx> rev(a.rbegin(), a.rend());
  const cplx w = 1.0 / z;
  cplx q, dq;
  horner_with_derivative(rev, w, q, dq);
  // p'(z) = n z^(n-1) q(w) - z^(n-2) q'(w)  =>  p/p' = z / (n - w q'/q)
  if (q == 0.0) return 0.0;
  const cplx denom = static_cast<double>(n) - w * dq / q;
  if (denom == 0.0) return 0.0;
  return z / denom;
}

// Simultaneous Aberth iteration on a[0..n] (a[n] != 0).
inline AberthResult aberth(const std::vector<cplx>& a, int max_iter = 200, double tol = 1e-13) {
  const std::size_t n = a.size() - 1;
  AberthResult res;
  if (n == 0) {
    res.converged = true;
    return res;
  }
  // Initial guesses on a circle whose radius is the geometric mean of the
  // root moduli, |a0/an|^(1/n), rotated off the real axis.
  double radius = std::pow(std::abs(a[0] / a[n]), 1.0 / static_cast<double>(n));
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
  res.roots.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n) + 0.4;
    res.roots[i] = std::polar(radius, theta);
  }
  std::vector<bool> done(n, false);
  for (int it = 0; it < max_iter; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const cplx z = res.roots[i];
      const cplx ratio = newton_ratio(a, z);
      cplx sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const cplx d = z - res.roots[j];
        if (d != 0.0) sum += 1.0 / d;
      }
      const cplx denom = 1.0 - ratio * sum;
      const cplx w = denom == 0.0 ? ratio : ratio / denom;
      res.roots[i] = z - w;
      if (std::abs(w) <= tol * std::max(1.0, std::abs(res.roots[i])))
        done[i] = true;
      else
        all_done = false;
    }
    res.iterations = it + 1;
    if (all_done) {
      res.converged = true;
      break;
    }
  }
  return res;
}

// A root of multiplicity m is a simple root of the (m-1)-th derivative;
// Newton there recovers it to full precision from a rough cluster centre.
inline cplx polish_multiple_root(std::vector<cplx> a, cplx z, int m) {
  for (int d = 1; d < m && a.size() > 1; ++d) {
    std::vector<cplx> da(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) da[i - 1] = static_cast<double>(i) * a[i];
    a = std::move(da);
  }
  if (a.size() < 2) return z;
  for (int it = 0; it < 50; ++it) {
    cplx p, dp;
    horner_with_derivative(a, z, p, dp);
    if (dp == 0.0) break;
    const cplx step = p / dp;
    z -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace detail

/// All roots (with repetition) of the ordinary polynomial obtained by
/// shifting the exponents of `p` to start at zero.
inline std::vector<cplx> lp_roots_raw(const LaurentPoly& p) {
  if (p.is_zero()) throw PreconditionError("lp_roots: zero polynomial");
  if (p.span() < 1) throw PreconditionError("lp_roots: degree span must be at least 1");
  const auto result = detail::aberth(p.coeffs());
  return result.roots;
}

/// Roots grouped into clusters; a cluster of m nearly coincident roots is
/// reported once with multiplicity m at its centroid.
inline std::vector<Root> lp_roots(const LaurentPoly& p, double cluster_tol = 1e-5) {
  const std::vector<cplx> raw = lp_roots_raw(p);
  std::vector<bool> used(raw.size(), false);
  std::vector<Root> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    cplx sum = raw[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(raw[j] - raw[i]) <= cluster_tol * std::max(1.0, std::abs(raw[i]))) {
        sum += raw[j];
        ++count;
        used[j] = true;
      }
    }
    out.push_back({sum / static_cast<double>(count), count});
  }
  return out;
}

/// lead * prod (z - r_i) * z^min_degree, i.e. p rebuilt from its roots.
/// The product is accumulated in long double; at degree 40 a double product
/// loses about eight digits to cancellation.
inline LaurentPoly lp_from_roots(const std::vector<Root>& roots, cplx lead, std::int64_t min_degree) {
  using CL = std::complex<long double>;
  std::vector<CL> c{CL(lead)};
  for (const auto& r : roots) {
    const CL z(r.value);
    for (int m = 0; m < r.multiplicity; ++m) {
      std::vector<CL> next(c.size() + 1, 0.0L);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= z * c[i];
      }
      c = std::move(next);
    }
  }
  std::vector<cplx> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = cplx(static_cast<double>(c[i].real()), static_cast<double>(c[i].imag()));
  return LaurentPoly(min_degree, std::move(out));
}

/// Max coefficient difference relative to the largest coefficient of `a`.
inline double lp_relative_distance(const LaurentPoly& a, const LaurentPoly& b) {
  const std::int64_t lo = std::min(a.min_degree(), b.min_degree());
  const std::int64_t hi = std::max(a.max_degree(), b.max_degree());
  double scale = 0.0, diff = 0.0;
  for (std::int64_t d = lo; d <= hi; ++d) {
    scale = std::max(scale, std::abs(a.coeff(d)));
    diff = std::max(diff, std::abs(a.coeff(d) - b.coeff(d)));
  }
  return scale == 0.0 ? diff : diff / scale;
}

/// Minimum of the real part of p on an n-point uniform unit-circle grid.
inline double lp_min_on_circle(const LaurentPoly& p, int n = 4096) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double k = -kPi + 2.0 * kPi * i / n;
    m = std::min(m, lp_eval(p, k).real());
  }
  return m;
}

/// Minimum-phase spectral factor f of a symmetric, nonnegative r:
/// f(z) * f~(z) = r(z).
///
/// Of each reciprocal root pair the one inside the unit circle is kept; unit-circle roots come in
/// pairs (r >= 0 there) and one root of each pair is assigned to f.
inline LaurentPoly spectral_factor(const LaurentPoly& r) {
  if (r.is_zero()) throw PreconditionError("spectral_factor: zero polynomial");
  if (r.max_degree() != -r.min_degree())
    throw PreconditionError("spectral_factor: polynomial is not centred (r(z) != r(1/z))");
  const std::int64_t n = r.max_degree();
  for (std::int64_t d = 0; d <= n; ++d) {
    const cplx a = r.coeff(d), b = r.coeff(-d);
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (std::abs(a - std::conj(b)) > 1e-10 * scale || std::abs(a.imag()) > 1e-10 * scale)
      throw PreconditionError("spectral_factor: polynomial is not real symmetric");
  }
  const double min_value = lp_min_on_circle(r, 4096);
  if (min_value < -1e-10)
    throw DesignError("spectral_factor: symbol is negative on the unit circle (min " +
                          std::to_string(min_value) + ")",
                      min_value);
  if (n == 0) return LaurentPoly::constant(std::sqrt(r.coeff(0).real()));

  const std::vector<cplx> raw = lp_roots_raw(r);
  constexpr double kUnitCircleTol = 1e-6;
  // Group roots lying within kClusterTol of each other. A cluster centred
  // on the unit circle is a root of even multiplicity m there, perturbed by
  // rounding to a ring of radius ~ eps^(1/m); its polished centre gets m/2
  // copies in f.
  constexpr double kClusterTol = 1e-3;
  std::vector<int> cluster(raw.size(), -1);
  int clusters = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = clusters;
    std::vector<std::size_t> pending{i};
    while (!pending.empty()) {
      const std::size_t g = pending.back();
      pending.pop_back();
      for (std::size_t j = 0; j < raw.size(); ++j)
        if (cluster[j] < 0 && std::abs(raw[j] - raw[g]) <= kClusterTol) {
          cluster[j] = clusters;
          pending.push_back(j);
        }
    }
    ++clusters;
  }
  std::vector<cplx> off_circle, chosen_roots;
  for (int c = 0; c < clusters; ++c) {
    std::vector<cplx> members;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (cluster[i] == c) members.push_back(raw[i]);
    cplx centre = 0.0;
    for (const auto& z : members) centre += z;
    centre /= static_cast<double>(members.size());
    if (members.size() > 1)
      centre = detail::polish_multiple_root(r.coeffs(), centre, static_cast<int>(members.size()));
    if (std::abs(std::abs(centre) - 1.0) > kUnitCircleTol) {
      off_circle.insert(off_circle.end(), members.begin(), members.end());
      continue;
    }
    if (members.size() % 2 != 0)
      throw DesignError("spectral_factor: odd multiplicity root on the unit circle",
                        static_cast<double>(members.size()));
    for (std::size_t m = 0; m < members.size() / 2; ++m) chosen_roots.push_back(centre / std::abs(centre));
  }
  // The rest come in pairs (z, 1/conj(z)); keep the half inside the circle.
  std::sort(off_circle.begin(), off_circle.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  if (off_circle.size() % 2 != 0)
    throw DesignError("spectral_factor: unpaired root off the unit circle", static_cast<double>(off_circle.size()));
  chosen_roots.insert(chosen_roots.end(), off_circle.begin(), off_circle.begin() + off_circle.size() / 2);
  if (static_cast<std::int64_t>(chosen_roots.size()) != n)
    throw DesignError("spectral_factor: root split failed (" + std::to_string(chosen_roots.size()) +
                          " of " + std::to_string(n) + " roots selected)",
                      static_cast<double>(chosen_roots.size()));

  std::vector<Root> chosen;
  chosen.reserve(chosen_roots.size());
  for (const auto& z : chosen_roots) chosen.push_back({z, 1});
  LaurentPoly f = lp_from_roots(chosen, 1.0, 0);
  // f f~ has top coefficient conj(f_0) * f_n = conj(f_0); match r_n.
  const double scale2 = std::abs(r.coeff(n)) / std::abs(f.coeff(0));
  f = lp_scale(f, std::sqrt(scale2));
  // Realness: conjugate root pairs make f real up to rounding.
  if (f.max_imag() < 1e-9) {
    std::vector<cplx> c = f.coeffs();
    for (auto& v : c) v = v.real();
    f = LaurentPoly(f.min_degree(), std::move(c));
  }
  return f;
}

}  // namespace wavemera
