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

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "symdet/baseline.hpp"

namespace {

using namespace symdet;

TEST(SqrtSymPd, SquaresBack) {
  std::mt19937_64 rng(5);
  const oracle::Instance in = oracle::random_instance(3, rng);
  const RealMatrix r = sqrt_sym_pd(in.v);
  EXPECT_LE(max_abs(RealMatrix(r - r.transpose())), 1e-13);
  EXPECT_LE(max_abs(RealMatrix(r * r - in.v)) / max_abs(in.v), 1e-12);
}

TEST(SqrtSymPd, RejectsIndefinite) {
  RealMatrix m(2, 2);
  m << 1, 0, 0, -1;
  try {
    (void)sqrt_sym_pd(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
  }
}

TEST(Baseline, WilliamsonFormInput) {
  const std::vector<double> lam{4.0, 2.5, 0.5};
  const WilliamsonDecomp w = decompose_baseline(CovMatrix(williamson_form(lam, Ordering::kInterleaved)));
  for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(w.lambdas[m], lam[m], 1e-12);
  EXPECT_LE(gauge_distance(w.S, RealMatrix::Identity(6, 6), lam), 1e-10);
}

TEST(Baseline, TwoModeFixture) {
  const oracle::Fixture f = oracle::two_mode(3.0, 2.0, 2.0);
  const WilliamsonDecomp w = decompose_baseline(CovMatrix(f.v));
  EXPECT_NEAR(w.lambdas[0], 2.0, 1e-12);
  EXPECT_NEAR(w.lambdas[1], 1.0, 1e-12);
  EXPECT_LE(gauge_distance(w.S, w.lambdas, f.s, f.lambdas), 1e-9);
}

TEST(Baseline, Intermediates) {
  std::mt19937_64 rng(6);
  for (int d = 1; d <= 5; ++d) {
    const oracle::Instance in = oracle::random_instance(d, rng);
    const BaselineWork w = baseline_work(CovMatrix(in.v));
    const Index n = 2 * d;
    EXPECT_LE(max_abs(RealMatrix(w.k * w.k.transpose() - RealMatrix::Identity(n, n))), 1e-10);
    EXPECT_LE(kxk_residual(w), 1e-9);
    std::vector<double> mus;
    for (const PairedEigen& p : w.pairs) mus.push_back(p.mu);
    std::vector<double> expected = in.lambdas;
    std::sort(expected.begin(), expected.end(), std::greater<>());
    for (int m = 0; m < d; ++m) EXPECT_NEAR(mus[m], expected[m], 1e-10 * expected[0]);
  }
}

TEST(Baseline, AgreesWithOracle) {
  std::mt19937_64 rng(7);
  for (int d = 1; d <= 6; ++d) {
    for (int t = 0; t < 4; ++t) {
      const oracle::Instance in = oracle::random_instance(d, rng);
      const WilliamsonDecomp w = decompose_baseline(CovMatrix(in.v));
      EXPECT_LE(gauge_distance(w.S, w.lambdas, in.s, in.lambdas), 1e-7) << d;
      EXPECT_LE(oracle::symplectic_defect(w.S), 1e-8);
      EXPECT_LE(oracle::williamson_residual(in.v, w.S, w.lambdas), 1e-8 * std::max(1.0, max_abs(in.v)));
    }
  }
}

TEST(Baseline, BlockOrdering) {
  const GeneratedCovariance g = random_covariance(std::vector<double>{1.5, 3.0}, 2, Ordering::kBlock);
  const WilliamsonDecomp w = decompose_baseline(g.cov);
  EXPECT_EQ(w.ordering, Ordering::kBlock);
  const Residuals r = certify(g.cov.matrix(), w.S, w.lambdas, Ordering::kBlock);
  EXPECT_LE(r.symp, 1e-9);
  EXPECT_LE(r.rec, 1e-9);
}

TEST(Baseline, RejectsNonPositiveDefinite) {
  const std::vector<double> lam{2.0, -1.0};
  EXPECT_THROW((void)decompose_baseline(CovMatrix(williamson_form(lam, Ordering::kInterleaved))), Error);
}

}  // namespace
