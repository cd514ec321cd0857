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
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "wavemera/error.hpp"

namespace wavemera {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTrimThreshold = 1e-14;

/// Finitely supported complex sequence on the integer lattice.
///
/// values[i] sits at lattice index offset + i; everything outside is zero.
/// Signals, filters and single-particle modes all use this representation,
/// so translations are exact integer arithmetic on the offset.
struct ModeSeq {
  std::int64_t offset = 0;
  std::vector<cplx> values;

  ModeSeq() = default;
  ModeSeq(std::int64_t off, std::vector<cplx> v)
      : offset(off), values(std::move(v)) {}
  ModeSeq(std::int64_t off, std::initializer_list<double> v)
      : offset(off), values(v.begin(), v.end()) {}

  static ModeSeq delta(std::int64_t n) { return ModeSeq(n, {1.0}); }

  static ModeSeq from_real(std::int64_t off, std::span<const double> v) {
    return ModeSeq(off, std::vector<cplx>(v.begin(), v.end()));
  }

  bool empty() const noexcept { return values.empty(); }
  std::size_t size() const noexcept { return values.size(); }

  /// First index past the support.
  std::int64_t end() const noexcept {
    return offset + static_cast<std::int64_t>(values.size());
  }

  cplx operator[](std::int64_t n) const noexcept {
    const std::int64_t i = n - offset;
    if (i < 0 || i >= static_cast<std::int64_t>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(i)];
  }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s;
  }
  double norm() const noexcept { return std::sqrt(norm_squared()); }

  double norm1() const noexcept {
    double s = 0.0;
    for (const auto& v : values) s += std::abs(v);
    return s;
  }

  /// Largest imaginary part in absolute value.
  double max_imag() const noexcept {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  /// Copy translated by `shift` lattice sites.
  ModeSeq shifted(std::int64_t shift) const {
    return ModeSeq(offset + shift, values);
  }

  /// Copy with leading and trailing entries below `threshold` removed.
  ModeSeq trimmed(double threshold = kTrimThreshold) const {
    std::size_t lo = 0, hi = values.size();
    while (lo < hi && std::abs(values[lo]) < threshold) ++lo;
    while (hi > lo && std::abs(values[hi - 1]) < threshold) --hi;
    if (lo == hi) return {};
    return ModeSeq(offset + static_cast<std::int64_t>(lo),
                   std::vector<cplx>(values.begin() + static_cast<std::ptrdiff_t>(lo),
                                     values.begin() + static_cast<std::ptrdiff_t>(hi)));
  }

  ModeSeq conjugated() const {
    ModeSeq out = *this;
    for (auto& v : out.values) v = std::conj(v);
    return out;
  }

  ModeSeq& operator*=(cplx s) {
    for (auto& v : values) v *= s;
    return *this;
  }

  /// Discrete-time Fourier transform sum_n f[n] exp(-i k n).
  cplx dtft(double k) const noexcept {
    // Phasor recurrence, re-anchored every 64 taps.
    const cplx step = std::polar(1.0, -k);
    cplx phase = std::polar(1.0, -k * static_cast<double>(offset));
    cplx acc = 0.0;
    std::size_t since_reset = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      acc += values[i] * phase;
      phase *= step;
      if (++since_reset == 64) {
        phase = std::polar(1.0, -k * static_cast<double>(offset + static_cast<std::int64_t>(i) + 1));
        since_reset = 0;
      }
    }
    return acc;
  }
};

inline ModeSeq operator+(const ModeSeq& a, const ModeSeq& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const std::int64_t lo = std::min(a.offset, b.offset);
  const std::int64_t hi = std::max(a.end(), b.end());
  ModeSeq out(lo, std::vector<cplx>(static_cast<std::size_t>(hi - lo), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    out.values[static_cast<std::size_t>(a.offset - lo) + i] += a.values[i];
  for (std::size_t i = 0; i < b.size(); ++i)
    out.values[static_cast<std::size_t>(b.offset - lo) + i] += b.values[i];
  return out;
}

inline ModeSeq operator*(cplx s, ModeSeq a) {
  a *= s;
  return a;
}

inline ModeSeq operator-(const ModeSeq& a, const ModeSeq& b) {
  return a + (-1.0) * b;
}

/// Linear convolution (a * b)[n] = sum_m a[m] b[n - m].
inline ModeSeq convolve(const ModeSeq& a, const ModeSeq& b) {
  if (a.empty() || b.empty()) return {};
  ModeSeq out(a.offset + b.offset,
              std::vector<cplx>(a.size() + b.size() - 1, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx ai = a.values[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out.values[i + j] += ai * b.values[j];
  }
  return out;
}

/// Inner product <a|b> = sum_n conj(a[n]) b[n].
inline cplx inner(const ModeSeq& a, const ModeSeq& b) noexcept {
  const std::int64_t lo = std::max(a.offset, b.offset);
  const std::int64_t hi = std::min(a.end(), b.end());
  cplx s = 0.0;
  for (std::int64_t n = lo; n < hi; ++n)
    s += std::conj(a.values[static_cast<std::size_t>(n - a.offset)]) *
         b.values[static_cast<std::size_t>(n - b.offset)];
  return s;
}

/// Max absolute entrywise difference over the union of supports.
inline double max_abs_diff(const ModeSeq& a, const ModeSeq& b) noexcept {
  if (a.empty() && b.empty()) return 0.0;
  std::int64_t lo, hi;
  if (a.empty()) {
    lo = b.offset;
    hi = b.end();
  } else if (b.empty()) {
    lo = a.offset;
    hi = a.end();
  } else {
    lo = std::min(a.offset, b.offset);
    hi = std::max(a.end(), b.end());
  }
  double m = 0.0;
  for (std::int64_t n = lo; n < hi; ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

/// Reversal n -> -n.
inline ModeSeq reversed(const ModeSeq& a) {
  ModeSeq out(-(a.end() - 1), std::vector<cplx>(a.values.rbegin(), a.values.rend()));
  return out;
}

}  // namespace wavemera
