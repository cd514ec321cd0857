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

// Half-sample-delay pairs of orthonormal scaling filters.
//
// A pair (h_s, g_s) shares a common factor F = (1+z)^K Q and differs only by
// an all-pass ratio z^L D(1/z) / D(z) that approximates a half-sample delay:
//
//   h_s = F * D,          g_s = F * z^L D(1/z),
//
// so |h_s(k)| = |g_s(k)| exactly and h_s(k) ~ exp(ik/2) g_s(k). Q is the
// minimum-phase spectral factor of the unique symmetric R that makes
// |h_s|^2 a halfband symbol.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wavemera/error.hpp"
#include "wavemera/laurent.hpp"
#include "wavemera/sequence.hpp"

namespace wavemera {

inline constexpr int kMaxDelayFlatness = 12;
inline constexpr const char* kGeneratorTag = "wavemera selesnick-halfband minphase v2";

struct FilterPair {
  int K = 1;
  int L = 0;
  int M = 2;  // filter length
  ModeSeq h_s, h_w, g_s, g_w;
  double epsilon = 0.0;
  double B = 1.0;
  std::string generator = kGeneratorTag;
};

/// Maximally flat all-pass denominator for a delay of 1/2 sample.
///
/// d[n] = (-1)^n C(L,n) prod_{j<n} (tau - L + j) / (tau + 1 + j), tau = 1/2.
namespace detail {

template <class T>
std::vector<T> flat_delay_coeffs(int L) {
  const T tau = T(1) / 2;
  std::vector<T> d(static_cast<std::size_t>(L) + 1);
  T binom = 1;
  for (int n = 0; n <= L; ++n) {
    if (n > 0) binom = binom * (L - n + 1) / n;
    T prod = 1;
    for (int j = 0; j < n; ++j) prod *= (tau - L + j) / (tau + 1 + j);
    d[static_cast<std::size_t>(n)] = ((n % 2) ? -binom : binom) * prod;
  }
  return d;
}

}  // namespace detail

inline LaurentPoly design_flat_delay(int L) {
  if (L < 0) throw PreconditionError("design_flat_delay: L must be >= 0");
  if (L > kMaxDelayFlatness)
    throw PreconditionError("design_flat_delay: L > " + std::to_string(kMaxDelayFlatness) +
                            " is not reliable in double precision");
  const auto d = detail::flat_delay_coeffs<double>(L);
  return LaurentPoly(0, std::vector<cplx>(d.begin(), d.end()));
}

/// arg of A(k) exp(ik/2) for the all-pass A = z^L D(1/z) / D(z): the
/// deviation of A from an exact half-sample delay at momentum k.
inline double allpass_phase_error(const LaurentPoly& D, double k) {
  const std::int64_t L = D.max_degree();
  const cplx num = lp_eval(lp_mul(LaurentPoly::monomial(L), lp_paraconjugate(D)), k);
  const cplx den = lp_eval(D, k);
  return std::arg(num / den * std::polar(1.0, k / 2.0));
}

/// Wavelet filter h_w(k) = exp(ik) conj(h_s(k + pi)), i.e.
/// h_w[m] = (-1)^(m+1) conj(h_s[-1-m]).
inline ModeSeq conjugate_mirror(const ModeSeq& h) {
  if (h.empty()) return {};
  const std::int64_t lo = -h.end();  // -1 - (end - 1)
  ModeSeq out(lo, std::vector<cplx>(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::int64_t m = lo + static_cast<std::int64_t>(i);
    const double sign = ((m + 1) % 2 == 0) ? 1.0 : -1.0;
    out.values[i] = sign * std::conj(h[-1 - m]);
  }
  return out;
}

namespace detail {

// Golden-section maximization of f on [a, b].
inline double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 80) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return std::max({fc, fd, f(0.5 * (a + b))});
}

}  // namespace detail

/// sup over k in (-pi, pi) of |h(k) - exp(ik/2) g(k)| for arbitrary
/// frequency responses: uniform grid, then golden-section refinement
/// around the grid maximizer.
inline double half_shift_error(const std::function<cplx(double)>& h,
                               const std::function<cplx(double)>& g, int grid_size) {
  if (grid_size < 1024) throw PreconditionError("half_shift_error: grid_size must be >= 1024");
  auto err = [&](double k) { return std::abs(h(k) - std::polar(1.0, k / 2.0) * g(k)); };
  const double step = 2.0 * kPi / grid_size;
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i < grid_size; ++i) {
    const double k = -kPi + (i + 0.5) * step;
    const double e = err(k);
    if (e > best) {
      best = e;
      best_i = i;
    }
  }
  const double kc = -kPi + (best_i + 0.5) * step;
  const double a = std::max(-kPi + 1e-12, kc - step);
  const double b = std::min(kPi - 1e-12, kc + step);
  return std::max(best, detail::golden_max(err, a, b));
}

inline double half_shift_error(const ModeSeq& h_s, const ModeSeq& g_s, int grid_size) {
  return half_shift_error([&](double k) { return h_s.dtft(k); },
                          [&](double k) { return g_s.dtft(k); }, grid_size);
}

/// Computes epsilon for the pair and stores it in pair.epsilon.
inline double half_shift_error(FilterPair& pair, int grid_size) {
  pair.epsilon = half_shift_error(pair.h_s, pair.g_s, grid_size);
  return pair.epsilon;
}

struct ScalingFunction {
  ModeSeq samples;  // samples[m] = phi(m * 2^-depth)
  int depth = 0;
  double B = 1.0;   // max |phi|, floored at 1
  double max_abs = 0.0;
  bool regular = true;
};

/// Cascade iteration phi_{j+1}(x) = sqrt(2) sum_n h[n] phi_j(2x - n) from
/// the indicator of [0, 1), sampled on the dyadic grid of spacing 2^-depth.
inline ScalingFunction scaling_function(const ModeSeq& h_s, int depth) {
  if (depth < 1) throw PreconditionError("scaling_function: depth must be >= 1");
  if (h_s.empty()) throw PreconditionError("scaling_function: empty filter");
  constexpr double kDivergence = 1e6;
  ScalingFunction out;
  out.depth = depth;
  ModeSeq c = ModeSeq::delta(0);
  const double s2 = std::sqrt(2.0);
  for (int j = 0; j < depth; ++j) {
    const std::int64_t stride = std::int64_t{1} << j;
    // c_{j+1}[m] = sqrt(2) sum_n h[n] c_j[m - n 2^j]
    ModeSeq next(c.offset + h_s.offset * stride,
                 std::vector<cplx>(c.size() + (h_s.size() - 1) * static_cast<std::size_t>(stride), 0.0));
    for (std::size_t n = 0; n < h_s.size(); ++n) {
      const cplx hn = s2 * h_s.values[n];
      const std::size_t base = n * static_cast<std::size_t>(stride);
      for (std::size_t i = 0; i < c.size(); ++i) next.values[base + i] += hn * c.values[i];
    }
    c = std::move(next);
    double m = 0.0;
    for (const auto& v : c.values) m = std::max(m, std::abs(v));
    if (m > kDivergence) {
      out.regular = false;
      out.max_abs = m;
      break;
    }
  }
  double m = 0.0;
  for (const auto& v : c.values) m = std::max(m, std::abs(v));
  out.max_abs = std::max(out.max_abs, m);
  out.B = std::max(1.0, out.max_abs);
  out.samples = std::move(c);
  return out;
}

inline constexpr int kDefaultEpsilonGrid = 8192;
inline constexpr int kDefaultCascadeDepth = 10;

namespace detail {

using Wide = boost::multiprecision::cpp_bin_float_50;

// Coefficients of S = (z + 2 + 1/z)^K D(z) D(1/z), exponents -(K+L)..(K+L).
inline std::vector<Wide> halfband_symbol(int K, int L) {
  const auto mul = [](const std::vector<Wide>& a, const std::vector<Wide>& b) {
    std::vector<Wide> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  };
  const auto d = flat_delay_coeffs<Wide>(L);
  std::vector<Wide> s{1};
  for (int i = 0; i < K; ++i) s = mul(s, {1, 2, 1});
  return mul(s, mul(d, std::vector<Wide>(d.rbegin(), d.rend())));
}

// Symmetric R of span -(J-1)..(J-1) such that S(z) R(z) is halfband:
// coefficient 1 at z^0 and 0 at every other even power. `s` holds the
// coefficients of a centred S; the result is r[0..J-1] with r[-m] = r[m].
// The system is badly conditioned for large K + L, so it is solved in
// 50-digit arithmetic with iterative refinement.
inline std::vector<Wide> solve_halfband_wide(const std::vector<Wide>& s, int J) {
  const std::int64_t centre = static_cast<std::int64_t>(s.size() - 1) / 2;
  const auto coeff = [&](std::int64_t e) -> Wide {
    const std::int64_t i = centre + e;
    return i >= 0 && i < static_cast<std::int64_t>(s.size()) ? s[static_cast<std::size_t>(i)] : Wide(0);
  };
  using Mat = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;
  Mat A = Mat::Zero(J, J);
  Vec rhs = Vec::Zero(J);
  rhs(0) = 1;
  for (int i = 0; i < J; ++i)
    for (int j = 0; j < J; ++j) A(i, j) = coeff(2 * i - j) + (j > 0 ? coeff(2 * i + j) : Wide(0));
  const auto lu = A.fullPivLu();
  Vec r = lu.solve(rhs);
  for (int it = 0; it < 3; ++it) r += lu.solve(rhs - A * r);
  const double residual = (A * r - rhs).norm().template convert_to<double>();
  if (!std::isfinite(residual) || residual > 1e-8)
    throw DesignError("halfband linear system is singular", residual);
  return std::vector<Wide>(r.data(), r.data() + J);
}

inline LaurentPoly symmetric_poly(const std::vector<Wide>& r) {
  const int J = static_cast<int>(r.size());
  std::vector<cplx> coeffs(static_cast<std::size_t>(2 * J - 1));
  for (int j = 0; j < J; ++j) {
    const double v = r[static_cast<std::size_t>(j)].convert_to<double>();
    coeffs[static_cast<std::size_t>(J - 1 + j)] = v;
    coeffs[static_cast<std::size_t>(J - 1 - j)] = v;
  }
  return LaurentPoly(-(J - 1), std::move(coeffs));
}

inline LaurentPoly solve_halfband(const LaurentPoly& S, int J) {
  std::vector<Wide> s;
  const std::int64_t n = std::max(S.max_degree(), -S.min_degree());
  for (std::int64_t e = -n; e <= n; ++e) s.push_back(Wide(S.coeff(e).real()));
  return symmetric_poly(solve_halfband_wide(s, J));
}

// Newton iteration on sum_n q[n] q[n+m] = r[m], m = 0..n, starting from an
// approximate real spectral factor q.
inline std::vector<Wide> refine_spectral_factor(std::vector<Wide> q, const std::vector<Wide>& r,
                                                int max_iter = 40) {
  const int n = static_cast<int>(q.size());
  using Mat = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;
  const auto at = [&](const std::vector<Wide>& v, int i) { return i >= 0 && i < n ? v[static_cast<std::size_t>(i)] : Wide(0); };
  const auto residual = [&](const std::vector<Wide>& v, Vec& out) {
    out.resize(n);
    Wide worst = 0;
    for (int m = 0; m < n; ++m) {
      Wide a = 0;
      for (int k = 0; k + m < n; ++k) a += v[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k + m)];
      out(m) = r[static_cast<std::size_t>(m)] - a;
      worst = std::max(worst, abs(out(m)));
    }
    return worst;
  };
  Wide scale = 0;
  for (const auto& v : r) scale = std::max(scale, abs(v));
  Vec res;
  Wide err = residual(q, res);
  std::vector<Wide> best = q;
  Wide best_err = err;
  for (int it = 0; it < max_iter && best_err > scale * Wide(1e-45); ++it) {
    Mat Jac(n, n);
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) Jac(m, k) = at(q, k + m) + at(q, k - m);
    const Vec step = Jac.fullPivLu().solve(res);
    for (int k = 0; k < n; ++k) q[static_cast<std::size_t>(k)] += step(k);
    err = residual(q, res);
    if (!isfinite(err)) break;
    if (err < best_err) {
      best = q;
      best_err = err;
    }
  }
  q = std::move(best);
  return q;
}

inline std::vector<Wide> wide_mul(const std::vector<Wide>& a, const std::vector<Wide>& b) {
  std::vector<Wide> out(a.size() + b.size() - 1, Wide(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline ModeSeq rounded_sequence(const std::vector<Wide>& c, const Wide& scale) {
  std::vector<cplx> v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v[i] = (scale * c[i]).convert_to<double>();
  return ModeSeq(0, std::move(v));
}

inline double orthonormality_residual(const ModeSeq& h);
inline double moment_residual(const ModeSeq& w, int K);

}  // namespace detail

/// Designs the (K, L) half-shift pair, its conjugate-mirror wavelet filters,
/// the half-shift error epsilon and the scaling-function bound B.
inline FilterPair design_pair(int K, int L, int epsilon_grid = kDefaultEpsilonGrid,
                              int cascade_depth = kDefaultCascadeDepth) {
  if (K < 1) throw PreconditionError("design_pair: K must be >= 1");
  if (L < 0) throw PreconditionError("design_pair: L must be >= 0");
  const int J = K + L;
  using detail::Wide;
  if (L > kMaxDelayFlatness) throw PreconditionError("design_pair: L > " + std::to_string(kMaxDelayFlatness));

  // R solves the halfband system; Q is its spectral factor, found from the
  // roots in double precision and then refined. F = (1 + z)^K Q, h_s = F D,
  // g_s = F z^L D(1/z).
  // R is rescaled to r[0] = 1 first: its raw scale can be so small that
  // the top coefficients would be trimmed as zero in double precision.
  std::vector<Wide> r = detail::solve_halfband_wide(detail::halfband_symbol(K, L), J);
  const Wide r0 = r[0];
  for (auto& v : r) v /= r0;
  const LaurentPoly Q0 = spectral_factor(detail::symmetric_poly(r));
  if (Q0.max_imag() > 1e-8) throw DesignError("design_pair: spectral factor is not real", Q0.max_imag());
  std::vector<Wide> q(static_cast<std::size_t>(J), Wide(0));
  for (std::int64_t e = 0; e < J; ++e) q[static_cast<std::size_t>(e)] = Wide(Q0.coeff(e).real());
  q = detail::refine_spectral_factor(std::move(q), r);

  std::vector<Wide> F = q;
  for (int i = 0; i < K; ++i) F = detail::wide_mul(F, {Wide(1), Wide(1)});
  const auto d = detail::flat_delay_coeffs<Wide>(L);
  const std::vector<Wide> H = detail::wide_mul(F, d);
  const std::vector<Wide> G = detail::wide_mul(F, std::vector<Wide>(d.rbegin(), d.rend()));
  Wide sum = 0;
  for (const auto& c : H) sum += c;
  const Wide scale = sqrt(Wide(2)) / sum;

  FilterPair pair;
  pair.K = K;
  pair.L = L;
  pair.h_s = detail::rounded_sequence(H, scale);
  pair.g_s = detail::rounded_sequence(G, scale);
  pair.M = static_cast<int>(std::max(pair.h_s.size(), pair.g_s.size()));
  pair.h_w = conjugate_mirror(pair.h_s);
  pair.g_w = conjugate_mirror(pair.g_s);
  const double ortho = std::max(detail::orthonormality_residual(pair.h_s), detail::orthonormality_residual(pair.g_s));
  if (!(ortho < 1e-10))
    throw DesignError("design_pair: orthonormality residual " + std::to_string(ortho) + " exceeds 1e-10", ortho);
  const double moments = std::max(detail::moment_residual(pair.h_w, K), detail::moment_residual(pair.g_w, K));
  if (!(moments < 1e-7))
    throw DesignError("design_pair: vanishing-moment residual " + std::to_string(moments) + " exceeds 1e-7", moments);
  half_shift_error(pair, epsilon_grid);
  const auto phi_h = scaling_function(pair.h_s, cascade_depth);
  const auto phi_g = scaling_function(pair.g_s, cascade_depth);
  if (!phi_h.regular || !phi_g.regular)
    throw DesignError("design_pair: cascade diverged (non-regular filter)",
                      std::max(phi_h.max_abs, phi_g.max_abs));
  pair.B = std::max(phi_h.B, phi_g.B);
  return pair;
}

/// Builds a pair directly from scaling filters (h_s, g_s); wavelet filters
/// are their conjugate mirrors.
inline FilterPair make_pair(ModeSeq h_s, ModeSeq g_s, int K = 0, int L = 0,
                            int epsilon_grid = kDefaultEpsilonGrid,
                            int cascade_depth = kDefaultCascadeDepth) {
  FilterPair pair;
  pair.K = K;
  pair.L = L;
  pair.h_s = std::move(h_s);
  pair.g_s = std::move(g_s);
  pair.M = static_cast<int>(std::max(pair.h_s.size(), pair.g_s.size()));
  pair.h_w = conjugate_mirror(pair.h_s);
  pair.g_w = conjugate_mirror(pair.g_s);
  half_shift_error(pair, epsilon_grid);
  pair.B = std::max(scaling_function(pair.h_s, cascade_depth).B,
                    scaling_function(pair.g_s, cascade_depth).B);
  pair.generator = "user";
  return pair;
}

/// Residuals of the invariants every orthonormal half-shift pair must meet.
struct PairDiagnostics {
  double orthonormality = 0.0;  // max_m |sum_n h[n] h[n-2m] - delta_m0| over h_s, g_s
  double dc_gain = 0.0;         // |sum h_s - sqrt(2)|, |sum g_s - sqrt(2)|
  double mirror = 0.0;          // h_w, g_w vs conjugate_mirror of the scaling filters
  double magnitude = 0.0;       // max_k ||h_s(k)| - |g_s(k)||
  double moments = 0.0;         // max_{j<K} |d^j/dk^j h_w(0)|, both wavelets
  double wavelet_orthogonality = 0.0;  // max_m |<h_w, h_s shifted by 2m>|
};

namespace detail {

inline double orthonormality_residual(const ModeSeq& h) {
  double r = 0.0;
  const auto n = static_cast<std::int64_t>(h.size());
  for (std::int64_t m = -(n / 2) - 1; m <= n / 2 + 1; ++m) {
    const cplx s = inner(h.shifted(2 * m), h);
    r = std::max(r, std::abs(s - (m == 0 ? 1.0 : 0.0)));
  }
  return r;
}

// Moments about the support centre; equal to the moments about zero once
// all lower moments vanish.
// Accumulated in long double: for large K the terms reach 1e10 and a
// double sum would be dominated by its own rounding.
inline double moment_residual(const ModeSeq& w, int count) {
  const long double centre = static_cast<long double>(w.offset) + 0.5L * static_cast<long double>(w.size() - 1);
  long double r = 0.0L;
  for (int j = 0; j < count; ++j) {
    std::complex<long double> s = 0.0L;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const long double x = static_cast<long double>(w.offset) + static_cast<long double>(i) - centre;
      s += std::complex<long double>(w.values[i]) * std::pow(x, j);
    }
    r = std::max(r, std::abs(s));
  }
  return static_cast<double>(r);
}

}  // namespace detail

inline PairDiagnostics diagnose(const FilterPair& pair, int grid = 4096) {
  PairDiagnostics d;
  d.orthonormality = std::max(detail::orthonormality_residual(pair.h_s),
                              detail::orthonormality_residual(pair.g_s));
  cplx sh = 0.0, sg = 0.0;
  for (auto v : pair.h_s.values) sh += v;
  for (auto v : pair.g_s.values) sg += v;
  d.dc_gain = std::max(std::abs(sh - std::sqrt(2.0)), std::abs(sg - std::sqrt(2.0)));
  d.mirror = std::max(max_abs_diff(pair.h_w, conjugate_mirror(pair.h_s)),
                      max_abs_diff(pair.g_w, conjugate_mirror(pair.g_s)));
  for (int i = 0; i < grid; ++i) {
    const double k = -kPi + (i + 0.5) * 2.0 * kPi / grid;
    d.magnitude = std::max(d.magnitude, std::abs(std::abs(pair.h_s.dtft(k)) - std::abs(pair.g_s.dtft(k))));
  }
  d.moments = std::max(detail::moment_residual(pair.h_w, pair.K),
                       detail::moment_residual(pair.g_w, pair.K));
  const auto n = static_cast<std::int64_t>(pair.h_s.size() + pair.h_w.size());
  for (std::int64_t m = -n; m <= n; ++m) {
    d.wavelet_orthogonality = std::max(
        {d.wavelet_orthogonality, std::abs(inner(pair.h_w, pair.h_s.shifted(2 * m))),
         std::abs(inner(pair.g_w, pair.g_s.shifted(2 * m)))});
  }
  return d;
}

}  // namespace wavemera
