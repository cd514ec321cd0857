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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "wavemera/filters.hpp"
#include "wavemera/laurent.hpp"

using namespace wavemera;

namespace {

LaurentPoly halfband_for(int K, int L) {
  const LaurentPoly D = design_flat_delay(L);
  const LaurentPoly S =
      lp_mul(lp_pow(LaurentPoly(-1, {1.0, 2.0, 1.0}), K), lp_mul(D, lp_paraconjugate(D)));
  return detail::solve_halfband(S, K + L);
}

cplx eval_at_z(const LaurentPoly& p, cplx z) {
  return oracle::horner(p.coeffs(), z) * std::pow(z, static_cast<double>(p.min_degree()));
}

}  // namespace

TEST(LaurentMul, DifferenceOfSquares) {
  const LaurentPoly p = lp_mul(LaurentPoly(0, {1.0, 1.0}), LaurentPoly(0, {1.0, -1.0}));
  EXPECT_EQ(p.min_degree(), 0);
  ASSERT_EQ(p.span(), 2);
  EXPECT_NEAR(std::abs(p.coeff(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.coeff(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.coeff(2) + 1.0), 0.0, 1e-15);
}

TEST(LaurentMul, InverseMonomials) {
  const LaurentPoly p = lp_mul(LaurentPoly::monomial(-1), LaurentPoly::monomial(1));
  EXPECT_EQ(p.min_degree(), 0);
  EXPECT_EQ(p.span(), 0);
  EXPECT_NEAR(std::abs(p.coeff(0) - 1.0), 0.0, 1e-15);
}

TEST(LaurentMul, ProductFilterReproducesHalfband) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (auto [K, L] : {std::pair{1, 1}, {2, 2}, {3, 3}, {2, 0}}) {
    const LaurentPoly R = halfband_for(K, L);
    const LaurentPoly F = spectral_factor(R);
    const LaurentPoly P = lp_mul(F, lp_paraconjugate(F));
    for (int i = 0; i < 64; ++i) {
      const cplx z = std::polar(1.0, angle(rng));
      EXPECT_LT(std::abs(eval_at_z(P, z) - eval_at_z(R, z)), 1e-12) << "K=" << K << " L=" << L;
    }
  }
}

TEST(LaurentMul, EvaluationIsMultiplicative) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> ca(7), cb(5);
    for (auto& c : ca) c = cplx(g(rng), g(rng));
    for (auto& c : cb) c = cplx(g(rng), g(rng));
    const LaurentPoly a(-3, ca), b(2, cb);
    const LaurentPoly ab = lp_mul(a, b);
    for (int i = 0; i < 256; ++i) {
      const double k = -kPi + 2.0 * kPi * (i + 0.5) / 256;
      EXPECT_LT(std::abs(lp_eval(ab, k) - lp_eval(a, k) * lp_eval(b, k)), 1e-12);
    }
  }
}

TEST(LaurentEval, Constant) {
  for (double k : {-2.0, 0.0, 0.7, 3.0}) EXPECT_NEAR(std::abs(lp_eval(LaurentPoly::constant(1.0), k) - 1.0), 0.0, 1e-15);
}

TEST(LaurentEval, InverseMonomialAtPi) {
  EXPECT_NEAR(std::abs(lp_eval(LaurentPoly::monomial(-1), kPi) - cplx(-1.0, 0.0)), 0.0, 1e-15);
}

TEST(LaurentEval, HaarAtZero) {
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(lp_eval(LaurentPoly(0, {r, r}), 0.0) - std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(LaurentEval, MatchesOracleDtft) {
  const LaurentPoly p(-2, {0.3, -1.2, 2.0, 0.5});
  for (double k : {-3.0, -0.4, 0.0, 1.1, 2.9})
    EXPECT_LT(std::abs(lp_eval(p, k) - oracle::dtft(p.to_sequence(), k)), 1e-14);
}

TEST(LaurentRoots, PlusMinusOne) {
  auto roots = lp_roots(LaurentPoly(0, {-1.0, 0.0, 1.0}));
  ASSERT_EQ(roots.size(), 2u);
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.value.real() < b.value.real(); });
  EXPECT_NEAR(std::abs(roots[0].value + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(roots[1].value - 1.0), 0.0, 1e-12);
  EXPECT_EQ(roots[0].multiplicity, 1);
}

TEST(LaurentRoots, DoubleRoot) {
  const auto roots = lp_roots(LaurentPoly(0, {4.0, -4.0, 1.0}));
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_EQ(roots[0].multiplicity, 2);
  EXPECT_NEAR(std::abs(roots[0].value - 2.0), 0.0, 1e-6);
}

TEST(LaurentRoots, Daubechies4ProductFilterReconstruction) {
  const LaurentPoly R = halfband_for(2, 0);
  const auto roots = lp_roots(R);
  const LaurentPoly back = lp_from_roots(roots, R.coeffs().back(), R.min_degree());
  EXPECT_LT(lp_relative_distance(R, back), 1e-9);
}

TEST(LaurentRoots, RandomReconstructionUpToDegree40) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int deg : {1, 5, 12, 25, 40}) {
    std::vector<cplx> c(static_cast<std::size_t>(deg + 1));
    for (auto& v : c) v = cplx(g(rng), g(rng));
    const LaurentPoly p(-deg / 2, c);
    const auto roots = lp_roots_raw(p);
    std::vector<Root> rs;
    for (const auto& r : roots) rs.push_back({r, 1});
    EXPECT_LT(lp_relative_distance(p, lp_from_roots(rs, p.coeffs().back(), p.min_degree())), 1e-9) << deg;
  }
}

TEST(LaurentRoots, ZeroPolynomialRejected) {
  EXPECT_THROW(lp_roots(LaurentPoly()), PreconditionError);
  EXPECT_THROW(lp_roots(LaurentPoly::constant(2.0)), PreconditionError);
}

TEST(SpectralFactor, TwoPlusZPlusInverse) {
  const LaurentPoly f = spectral_factor(LaurentPoly(-1, {1.0, 2.0, 1.0}));
  ASSERT_EQ(f.span(), 1);
  const cplx ratio = f.coeffs()[1] / f.coeffs()[0];
  EXPECT_NEAR(std::abs(ratio - 1.0), 0.0, 1e-6);
  EXPECT_NEAR(std::norm(f.coeffs()[0]), 1.0, 1e-6);
}

TEST(SpectralFactor, One) {
  const LaurentPoly f = spectral_factor(LaurentPoly::constant(1.0));
  ASSERT_EQ(f.span(), 0);
  EXPECT_NEAR(std::abs(f.coeffs()[0]), 1.0, 1e-15);
}

TEST(SpectralFactor, Daubechies4Orthonormal) {
  // (1+z)^2 Q with Q the factor of the K=2, L=0 halfband solution.
  const LaurentPoly F = lp_mul(lp_pow(LaurentPoly(0, {1.0, 1.0}), 2), spectral_factor(halfband_for(2, 0)));
  const ModeSeq h = F.to_sequence();
  cplx sum = 0.0;
  for (auto v : h.values) sum += v;
  const ModeSeq hn = (std::sqrt(2.0) / sum) * h;
  for (int m = -2; m <= 2; ++m) {
    const cplx s = oracle::shifted_overlap(hn, hn, 2 * m);
    EXPECT_NEAR(std::abs(s - (m == 0 ? 1.0 : 0.0)), 0.0, 1e-12) << m;
  }
}

TEST(SpectralFactor, MagnitudeMatchesOnDenseGrid) {
  for (auto [K, L] : {std::pair{1, 1}, {2, 2}, {3, 3}, {4, 4}, {2, 0}}) {
    const LaurentPoly R = halfband_for(K, L);
    const LaurentPoly f = spectral_factor(R);
    double worst = 0.0;
    for (int i = 0; i < 4096; ++i) {
      const double k = -kPi + 2.0 * kPi * i / 4096;
      worst = std::max(worst, std::abs(std::norm(lp_eval(f, k)) - lp_eval(R, k).real()));
    }
    EXPECT_LT(worst, 1e-8) << "K=" << K << " L=" << L;
  }
}

TEST(SpectralFactor, UnitCircleRootsSplitEvenly) {
  // (2 + z + 1/z)^2 has a fourfold root at -1; the factor keeps two.
  const LaurentPoly r = lp_pow(LaurentPoly(-1, {1.0, 2.0, 1.0}), 2);
  const LaurentPoly f = spectral_factor(r);
  EXPECT_EQ(f.span(), 2);
  EXPECT_LT(std::abs(lp_eval(f, kPi)), 1e-6);
  for (int i = 0; i < 4096; ++i) {
    const double k = -kPi + 2.0 * kPi * i / 4096;
    EXPECT_NEAR(std::norm(lp_eval(f, k)), lp_eval(r, k).real(), 1e-8);
  }
}

TEST(SpectralFactor, RejectsNegativeSymbol) {
  EXPECT_THROW(spectral_factor(LaurentPoly(-1, {1.0, 1.0, 1.0})), DesignError);
}

TEST(SpectralFactor, RejectsAsymmetricInput) {
  EXPECT_THROW(spectral_factor(LaurentPoly(0, {1.0, 1.0})), PreconditionError);
}
