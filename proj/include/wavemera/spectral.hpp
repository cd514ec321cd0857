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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "wavemera/dwt.hpp"
#include "wavemera/error.hpp"
#include "wavemera/fermion1d.hpp"
#include "wavemera/filters.hpp"
#include "wavemera/sequence.hpp"

namespace wavemera {

/// Samples of a function of momentum. `valid` is empty when every sample is
/// defined.
struct SampledCurve {
  std::vector<double> kgrid;
  std::vector<cplx> values;
  std::vector<bool> valid;

  std::size_t size() const noexcept { return kgrid.size(); }
  bool is_valid(std::size_t i) const { return valid.empty() || valid[i]; }

  std::vector<double> real() const {
    std::vector<double> r(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) r[i] = values[i].real();
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (is_valid(i)) m = std::max(m, std::abs(values[i]));
    return m;
  }

  double max_imag() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
  }
};

inline constexpr int kDefaultKgridSize = 1024;

/// n uniform midpoints of (-pi, pi); for even n neither 0 nor +-pi is hit.
inline std::vector<double> default_kgrid(int n = kDefaultKgridSize) {
  if (n < 1) throw PreconditionError("default_kgrid: n must be >= 1");
  std::vector<double> k(static_cast<std::size_t>(n));
  const double step = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = -kPi + (i + 0.5) * step;
  return k;
}

namespace detail {

inline void require_kgrid(const std::vector<double>& kgrid) {
  for (std::size_t i = 0; i < kgrid.size(); ++i) {
    if (!(kgrid[i] > -kPi && kgrid[i] < kPi))
      throw PreconditionError("kgrid: momenta must lie in (-pi, pi)");
    if (i > 0 && !(kgrid[i] > kgrid[i - 1]))
      throw PreconditionError("kgrid: momenta must be strictly increasing");
  }
}

}  // namespace detail

/// Maps k to the representative in (-pi, pi].
inline double wrap_momentum(double k) {
  double r = std::remainder(k, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

inline cplx theta_s(double k) { return std::polar(1.0, -wrap_momentum(k) / 2.0); }

inline cplx theta_w(double k) {
  const double w = wrap_momentum(k);
  const double sgn = w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
  return cplx(0.0, -sgn) * std::polar(1.0, w / 2.0);
}

inline SampledCurve dtft(const ModeSeq& f, const std::vector<double>& kgrid) {
  detail::require_kgrid(kgrid);
  SampledCurve c;
  c.kgrid = kgrid;
  c.values.reserve(kgrid.size());
  for (double k : kgrid) c.values.push_back(f.dtft(k));
  return c;
}

/// Fourier transform of scaling_mode(h_s, level): prod_{j<level} h_s(2^j k).
inline cplx scaling_mode_dtft(const ModeSeq& h_s, int level, double k) {
  cplx v = 1.0;
  for (int j = 0; j < level; ++j) v *= h_s.dtft(std::ldexp(k, j));
  return v;
}

/// Fourier transform of wavelet_mode(h_s, h_w, level).
inline cplx wavelet_mode_dtft(const ModeSeq& h_s, const ModeSeq& h_w, int level, double k) {
  cplx v = h_w.dtft(std::ldexp(k, level - 1));
  for (int j = 0; j + 1 < level; ++j) v *= h_s.dtft(std::ldexp(k, j));
  return v;
}

/// Ideal ratio g-mode / h-mode at the given level for an exact half-shift.
inline cplx ideal_wavelet_ratio(int level, double k) {
  cplx v = theta_w(std::ldexp(k, level - 1));
  for (int j = 0; j + 1 < level; ++j) v *= theta_s(std::ldexp(k, j));
  return v;
}

inline cplx ideal_scaling_ratio(int level, double k) {
  cplx v = 1.0;
  for (int j = 0; j < level; ++j) v *= theta_s(std::ldexp(k, j));
  return v;
}

inline constexpr double kPhaseMagnitudeFloor = 1e-9;

/// Relative phase of the g- and h-cascade wavelet modes, stored as unit
/// phasors; samples where the h-mode nearly vanishes are flagged invalid.
struct PhaseDifference {
  int level = 1;
  SampledCurve measured;
  SampledCurve target;

  /// Largest |arg(measured / target)| over valid samples with kmin < |k| < kmax.
  double max_deviation(double kmin = 0.0, double kmax = kPi) const {
    double m = 0.0;
    for (std::size_t i = 0; i < measured.size(); ++i) {
      const double ak = std::abs(measured.kgrid[i]);
      if (!measured.is_valid(i) || ak <= kmin || ak >= kmax) continue;
      m = std::max(m, std::abs(std::arg(measured.values[i] / target.values[i])));
    }
    return m;
  }
};

template <class HMode, class GMode>
PhaseDifference phase_difference(const HMode& h_mode, const GMode& g_mode, int level,
                                 const std::vector<double>& kgrid) {
  detail::require_kgrid(kgrid);
  PhaseDifference out;
  out.level = level;
  out.measured.kgrid = out.target.kgrid = kgrid;
  out.measured.valid.assign(kgrid.size(), true);
  for (std::size_t i = 0; i < kgrid.size(); ++i) {
    const double k = kgrid[i];
    const cplx h = h_mode(k), g = g_mode(k);
    out.target.values.push_back(ideal_wavelet_ratio(level, k));
    if (std::abs(h) < kPhaseMagnitudeFloor || std::abs(g) < kPhaseMagnitudeFloor) {
      out.measured.valid[i] = false;
      out.measured.values.push_back(0.0);
    } else {
      const cplx r = g / h;
      out.measured.values.push_back(r / std::abs(r));
    }
  }
  return out;
}

inline PhaseDifference phase_difference(const FilterPair& pair, int level,
                                        const std::vector<double>& kgrid = default_kgrid()) {
  if (level < 1) throw PreconditionError("phase_difference: level must be >= 1");
  const ModeSeq ph = wavelet_mode(pair.h_s, pair.h_w, level);
  const ModeSeq pg = wavelet_mode(pair.g_s, pair.g_w, level);
  return phase_difference([&](double k) { return ph.dtft(k); },
                          [&](double k) { return pg.dtft(k); }, level, kgrid);
}

/// Operator norm of the difference between the g-cascade and the ideally
/// phase-shifted h-cascade at the given level:
/// sup_k sqrt(2^-l sum_t |G(kappa_t) - Theta(kappa_t) H(kappa_t)|^2).
inline double mode_phase_error(const FilterPair& pair, int level,
                               const std::vector<double>& kgrid = default_kgrid()) {
  if (level < 1) throw PreconditionError("mode_phase_error: level must be >= 1");
  detail::require_kgrid(kgrid);
  const int aliases = 1 << level;
  double worst = 0.0;
  for (double k : kgrid) {
    double s = 0.0;
    for (int t = 0; t < aliases; ++t) {
      const double kappa = std::ldexp(k + 2.0 * kPi * t, -level);
      const cplx h = wavelet_mode_dtft(pair.h_s, pair.h_w, level, kappa);
      const cplx g = wavelet_mode_dtft(pair.g_s, pair.g_w, level, kappa);
      s += std::norm(g - ideal_wavelet_ratio(level, kappa) * h);
    }
    worst = std::max(worst, std::sqrt(std::ldexp(s, -level)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Momentum support relative to the Fermi sea |k| < pi/2

struct FermiSupport {
  SampledCurve inside;
  SampledCurve outside;
  /// Largest |DTFT| on the wrong side of the Fermi points.
  double side_lobe = 0.0;
};

inline FermiSupport fermi_support(const std::function<cplx(double)>& mode_dtft, bool filled,
                                  const std::vector<double>& kgrid) {
  detail::require_kgrid(kgrid);
  FermiSupport fs;
  for (double k : kgrid) {
    const double mag = std::abs(mode_dtft(k));
    const bool in_sea = std::abs(k) < kPi / 2.0;
    SampledCurve& c = in_sea ? fs.inside : fs.outside;
    c.kgrid.push_back(k);
    c.values.push_back(mag);
    if (in_sea != filled) fs.side_lobe = std::max(fs.side_lobe, mag);
  }
  return fs;
}

/// Support of the level-l filled (or empty) mode on the original lattice.
inline FermiSupport fermi_support(const FilterPair& pair, int level,
                                  const std::vector<double>& kgrid = default_kgrid(),
                                  bool filled = true) {
  if (level < 1) throw PreconditionError("fermi_support: level must be >= 1");
  const HadamardSign s = filled_sign(pair);
  const HadamardSign sign =
      filled ? s : (s == HadamardSign::plus ? HadamardSign::minus : HadamardSign::plus);
  const ModeSeq phi = assemble_mode(pair, level, sign);
  return fermi_support([&](double k) { return phi.dtft(k); }, filled, kgrid);
}

// ---------------------------------------------------------------------------
// Renormalized Hamiltonians

/// Off-diagonal entry of the blocked hopping kernel, e^{-ik} - 1.
inline cplx blocked_hopping(double k) { return std::polar(1.0, -k) - 1.0; }

/// Effective 2x2 Hamiltonians on the level-l scaling and wavelet outputs.
/// Both are off-diagonal in the (h, g) basis; `scaling_offdiag` and
/// `wavelet_offdiag` hold the (1,2) entries, whose moduli are e_l and eps_l.
struct Dispersion {
  int level = 1;
  SampledCurve e_curve;
  SampledCurve eps_curve;
  SampledCurve scaling_offdiag;
  SampledCurve wavelet_offdiag;
};

namespace detail {

template <class F1, class F2>
cplx alias_sum(int level, double k, const F1& f1, const F2& f2) {
  const int aliases = 1 << level;
  cplx s = 0.0;
  for (int t = 0; t < aliases; ++t) {
    const double kappa = std::ldexp(k + 2.0 * kPi * t, -level);
    s += std::conj(f1(kappa)) * blocked_hopping(kappa) * f2(kappa);
  }
  return std::ldexp(1.0, -level) * s;
}

}  // namespace detail

inline cplx scaling_offdiag(const FilterPair& pair, int level, double k) {
  return detail::alias_sum(
      level, k, [&](double q) { return scaling_mode_dtft(pair.h_s, level, q); },
      [&](double q) { return scaling_mode_dtft(pair.g_s, level, q); });
}

inline cplx wavelet_offdiag(const FilterPair& pair, int level, double k) {
  return detail::alias_sum(
      level, k, [&](double q) { return wavelet_mode_dtft(pair.h_s, pair.h_w, level, q); },
      [&](double q) { return wavelet_mode_dtft(pair.g_s, pair.g_w, level, q); });
}

inline Dispersion renormalized_dispersion(const FilterPair& pair, int level,
                                          const std::vector<double>& kgrid = default_kgrid()) {
  if (level < 1) throw PreconditionError("renormalized_dispersion: level must be >= 1");
  detail::require_kgrid(kgrid);
  Dispersion d;
  d.level = level;
  d.e_curve.kgrid = d.eps_curve.kgrid = d.scaling_offdiag.kgrid = d.wavelet_offdiag.kgrid = kgrid;
  for (double k : kgrid) {
    const cplx bs = scaling_offdiag(pair, level, k);
    const cplx bw = wavelet_offdiag(pair, level, k);
    d.scaling_offdiag.values.push_back(bs);
    d.wavelet_offdiag.values.push_back(bw);
    d.e_curve.values.push_back(std::abs(bs));
    d.eps_curve.values.push_back(std::abs(bw));
  }
  return d;
}

/// sup_k |2^a e_a(k) - 2^b e_b(k)| / sup_k |2^b e_b(k)|, on a shared grid.
inline double fixed_point_ratio(const Dispersion& a, const Dispersion& b) {
  if (a.e_curve.kgrid != b.e_curve.kgrid) throw PreconditionError("fixed_point_ratio: grids differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.e_curve.size(); ++i) {
    const double va = std::ldexp(a.e_curve.values[i].real(), a.level);
    const double vb = std::ldexp(b.e_curve.values[i].real(), b.level);
    num = std::max(num, std::abs(va - vb));
    den = std::max(den, std::abs(vb));
  }
  return num / den;
}

/// Departure of the scaling block from the form e_l(k)(cos(k/2) sigma_y -
/// sin(k/2) sigma_x), relative to sup e_l.
inline double scaling_structure_residual(const Dispersion& d) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.scaling_offdiag.size(); ++i) {
    const double k = d.scaling_offdiag.kgrid[i];
    const cplx b = d.scaling_offdiag.values[i];
    const double sgn = k > 0.0 ? 1.0 : -1.0;
    const cplx target = std::abs(b) * cplx(0.0, -sgn) * std::polar(1.0, -k / 2.0);
    num = std::max(num, std::abs(b - target));
    den = std::max(den, std::abs(b));
  }
  return num / den;
}

/// sup_k |B_w(k) + |B_w(k)||: the gap between eps_l and minus the diagonal
/// entry of the wavelet block in the Hadamard basis.
inline double wavelet_interaction_residual(const Dispersion& d) {
  double m = 0.0;
  for (const auto& b : d.wavelet_offdiag.values) m = std::max(m, std::abs(b + std::abs(b)));
  return m;
}

}  // namespace wavemera
