// Copyright 2026 The symdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "symdet/detdiag.hpp"
#include "symdet/indefinite.hpp"

namespace {

using namespace symdet;

CovMatrix signed_cov(const std::vector<double>& signed_lambdas, std::uint64_t seed) {
  return random_covariance(signed_lambdas, seed).cov;
}

TEST(PositiveEigenvalues, RecoversMagnitudes) {
  const CovMatrix v = signed_cov({3.0, -1.0, 0.5}, 4);
  const std::vector<Complex> plus = positive_eigenvalues(v);
  ASSERT_EQ(plus.size(), 3u);
  EXPECT_NEAR(plus[0].real(), 3.0, 1e-10);
  EXPECT_NEAR(plus[1].real(), 1.0, 1e-10);
  EXPECT_NEAR(plus[2].real(), 0.5, 1e-10);
  for (const Complex& z : plus) EXPECT_NEAR(z.imag(), 0.0, 1e-10);
}

TEST(PositiveEigenvalues, ZeroEigenvalue) {
  RealMatrix m = RealMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 2.0;
  try {
    (void)positive_eigenvalues(CovMatrix(m));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroSymplecticEigenvalue);
  }
}

TEST(SignedSpectrum, PositiveDefiniteAllPlus) {
  std::mt19937_64 rng(2);
  const oracle::Instance in = oracle::random_instance(3, rng);
  const SignedSpectrum sp = signed_spectrum(CovMatrix(in.v));
  for (int s : sp.signs) EXPECT_EQ(s, 1);
  EXPECT_TRUE(sp.all_real());
}

TEST(SignedSpectrum, DegenerateRejected) {
  try {
    (void)signed_spectrum(signed_cov({2.0, -2.0}, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateSpectrum);
  }
}

TEST(Gimel, SignIndependentOfColumn) {
  const CovMatrix v = signed_cov({2.5, -1.5, 0.75}, 9);
  const std::vector<Complex> plus = positive_eigenvalues(v);
  const std::vector<int> expected{1, -1, 1};
  for (Index m = 0; m < 3; ++m) {
    for (Index k : {0, 2, 5}) {
      const Complex g = gimel(v, plus, m, k);
      if (std::abs(g) < 1e-8) continue;
      EXPECT_EQ(g.real() > 0 ? 1 : -1, expected[static_cast<std::size_t>(m)]) << m << " " << k;
      EXPECT_LE(std::abs(g.imag()), 1e-8 * std::abs(g));
    }
  }
}

TEST(DecomposeIndefinite, PositiveDefiniteMatchesDet) {
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 4; ++d) {
    const oracle::Instance in = oracle::random_instance(d, rng);
    const CovMatrix v(in.v);
    const IndefiniteResult r = decompose_indefinite(v);
    ASSERT_TRUE(r.diagonalizable) << r.reason;
    const WilliamsonDecomp det = decompose_det(v);
    EXPECT_EQ(r.decomp->method, Method::kDetIndefinite);
    EXPECT_LE(gauge_distance(r.decomp->S, r.decomp->lambdas, det.S, det.lambdas), 1e-8);
  }
}

TEST(DecomposeIndefinite, WilliamsonFormRoundTrip) {
  const std::vector<double> lam{2.0, -3.0};
  const RealMatrix d = williamson_form(lam, Ordering::kInterleaved);
  const IndefiniteResult r = decompose_indefinite(CovMatrix(d));
  ASSERT_TRUE(r.diagonalizable) << r.reason;
  EXPECT_NEAR(r.decomp->lambdas[0], 2.0, 1e-12);
  EXPECT_NEAR(r.decomp->lambdas[1], -3.0, 1e-12);
  EXPECT_LE(max_abs(RealMatrix(r.decomp->S.transpose() * d * r.decomp->S - d)), 1e-12);
}

TEST(DecomposeIndefinite, IdentityUpToGauge) {
  const std::vector<double> lam{1.0, -2.0};
  const IndefiniteResult r = decompose_indefinite(CovMatrix(williamson_form(lam, Ordering::kInterleaved)));
  ASSERT_TRUE(r.diagonalizable) << r.reason;
  EXPECT_LE(gauge_distance(r.decomp->S, r.decomp->lambdas, RealMatrix::Identity(4, 4), lam), 1e-10);
}

TEST(DecomposeIndefinite, ThreeModeMixedSigns) {
  const GeneratedCovariance g = random_covariance(std::vector<double>{3.0, -1.0, 0.5}, 11);
  const IndefiniteResult r = decompose_indefinite(g.cov);
  ASSERT_TRUE(r.diagonalizable) << r.reason;
  const std::vector<double> expected{3.0, 0.5, -1.0};
  for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(r.decomp->lambdas[m], expected[m], 1e-9);
  EXPECT_LE(r.residuals.symp, 1e-8);
  EXPECT_LE(r.residuals.rec, 1e-8);
  EXPECT_LE(oracle::williamson_residual(g.cov.matrix(), r.decomp->S, r.decomp->lambdas), 1e-8);
}

TEST(DecomposeIndefinite, BlockOrdering) {
  const GeneratedCovariance g =
      random_covariance(std::vector<double>{-1.5, 4.0}, 5, Ordering::kBlock);
  const IndefiniteResult r = decompose_indefinite(g.cov);
  ASSERT_TRUE(r.diagonalizable) << r.reason;
  EXPECT_EQ(r.decomp->ordering, Ordering::kBlock);
  const Residuals res = certify(g.cov.matrix(), r.decomp->S, r.decomp->lambdas, Ordering::kBlock);
  EXPECT_LE(res.symp, 1e-8);
  EXPECT_LE(res.rec, 1e-8);
}

TEST(DecomposeIndefinite, ImaginaryPairIsFlagged) {
  RealMatrix m(2, 2);
  m << 1, 0, 0, -1;
  const IndefiniteResult r = decompose_indefinite(CovMatrix(m));
  EXPECT_FALSE(r.diagonalizable);
  EXPECT_FALSE(r.decomp.has_value());
  EXPECT_FALSE(r.spectrum.all_real());
  EXPECT_FALSE(r.reason.empty());
}

TEST(DecomposeIndefinite, RandomSymmetricVerdicts) {
  // Random indefinite matrices: every outcome is either a certified
  // decomposition or a verdict, never an exception other than the
  // spectrum-level ones.
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  int verdicts = 0;
  for (int trial = 0; trial < 40; ++trial) {
    RealMatrix m(4, 4);
    for (Index i = 0; i < 4; ++i) {
      for (Index j = i; j < 4; ++j) m(i, j) = m(j, i) = g(rng);
    }
    try {
      const IndefiniteResult r = decompose_indefinite(CovMatrix(m));
      if (r.diagonalizable) {
        EXPECT_LE(r.residuals.rec, 1e-8);
      } else {
        EXPECT_FALSE(r.reason.empty());
        ++verdicts;
      }
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::kDegenerateSpectrum ||
                  e.code() == ErrorCode::kZeroSymplecticEigenvalue)
          << e.what();
    }
  }
  EXPECT_GT(verdicts, 0);
}

}  // namespace
