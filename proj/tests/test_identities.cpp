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
#include "symdet/baseline.hpp"
#include "symdet/identities.hpp"

namespace {

using namespace symdet;

constexpr Ordering kX = Ordering::kInterleaved;

ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

// Instance with a prescribed (possibly repeated) spectrum and its exact S.
oracle::Instance with_spectrum(const std::vector<double>& lam, std::mt19937_64& rng) {
  const int d = static_cast<int>(lam.size());
  oracle::Instance in;
  in.lambdas = lam;
  in.s = oracle::random_symplectic(d, rng);
  RealMatrix dm = RealMatrix::Zero(2 * d, 2 * d);
  for (int m = 0; m < d; ++m) dm(2 * m, 2 * m) = dm(2 * m + 1, 2 * m + 1) = lam[m];
  in.v = in.s.transpose() * dm * in.s;
  in.v = 0.5 * (in.v + in.v.transpose()).eval();
  return in;
}

TEST(Selector, ReproducesMinor) {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = random_complex(5, 5, rng);
  for (Index k = 0; k < 5; ++k) {
    for (Index l = 0; l < 5; ++l) {
      const ComplexMatrix r = selector(5, k).adjoint() * a * selector(5, l);
      EXPECT_EQ(r, delete_row_col(a, k, l));
    }
  }
  EXPECT_THROW((void)selector(3, 3), Error);
}

TEST(ConcatMatrix, Realise) {
  ComplexMatrix base = ComplexMatrix::Identity(3, 2);
  const ComplexVector v = ComplexVector::Constant(3, Complex(0, 1));
  const ComplexMatrix m = ConcatMatrix{base, {v}}.realise();
  EXPECT_EQ(m.col(2), v);
  EXPECT_THROW((void)(ConcatMatrix{base, {}}.realise()), Error);
}

TEST(Theorem1, BaselineSVectors) {
  std::mt19937_64 rng(2);
  for (int d = 1; d <= 4; ++d) {
    const oracle::Instance in = oracle::random_instance(d, rng);
    const WilliamsonDecomp b = decompose_baseline(CovMatrix(in.v));
    const auto sv = s_vectors_from_S(b.S, kX);
    for (Index m = 0; m < d; ++m) {
      for (Index k = 0; k < 2 * d; ++k) {
        for (Index l = 0; l < 2 * d; ++l) {
          const IdentitySides s = theorem1_sides(in.v, b.lambdas, m, k, l, sv[m], kX);
          EXPECT_LE(s.relative_error(), 1e-7) << d << ' ' << m << ' ' << k << ' ' << l;
        }
      }
    }
  }
}

TEST(Theorem1, DiagonalMinorSignMatchesAleph) {
  // det R_{k,k}(A_m) / ℵ_m = |s_{m,k}|² >= 0 for positive-definite V.
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 4; ++d) {
    const oracle::Instance in = oracle::random_instance(d, rng);
    const std::vector<double> lam = symplectic_eigenvalues(CovMatrix(in.v)).lambdas;
    for (Index m = 0; m < d; ++m) {
      const ComplexVector diag = diagonal_minors(a_matrix(in.v, lam[m], kX));
      const double al = aleph(std::span<const double>(lam), static_cast<std::size_t>(m));
      const double scale = diag.cwiseAbs().maxCoeff() / std::abs(al);
      for (Index k = 0; k < 2 * d; ++k) EXPECT_GE(diag(k).real() / al, -1e-10 * scale);
    }
  }
}

TEST(Theorem2, SelectorsReduceToTheorem1) {
  const oracle::Fixture f = oracle::two_mode(3, 2, 2);
  const auto sv = s_vectors_from_S(f.s, kX);
  for (Index m = 0; m < 2; ++m) {
    for (Index k = 0; k < 4; ++k) {
      for (Index l = 0; l < 4; ++l) {
        const IdentitySides t2 = theorem2_sides(f.v, f.lambdas, m, selector(4, k), selector(4, l), sv[m], kX);
        const IdentitySides t1 = theorem1_sides(f.v, f.lambdas, m, k, l, sv[m], kX);
        EXPECT_LE(std::abs(t2.lhs - t1.lhs), 1e-12 * std::max(1.0, std::abs(t1.lhs)));
        EXPECT_LE(t2.relative_error(), 1e-10);
        EXPECT_LE(t1.relative_error(), 1e-10);
      }
    }
  }
}

TEST(Theorem2, RandomBases) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4;
    const oracle::Instance in = oracle::random_instance(d, rng);
    const auto sv = s_vectors_from_S(in.s, kX);
    const Index m = trial % d;
    const ComplexMatrix bx = random_complex(2 * d, 2 * d - 1, rng);
    const ComplexMatrix by = random_complex(2 * d, 2 * d - 1, rng);
    const IdentitySides s = theorem2_sides(in.v, in.lambdas, m, bx, by, sv[m], kX);
    EXPECT_LE(s.relative_error(), 1e-7) << trial;
  }
}

TEST(Theorem2, DegenerateModeBothSidesVanish) {
  const oracle::Fixture f = oracle::degenerate(1.0);
  const auto sv = s_vectors_from_S(f.s, kX);
  std::mt19937_64 rng(5);
  const ComplexMatrix bx = random_complex(6, 5, rng), by = random_complex(6, 5, rng);
  const IdentitySides s = theorem2_sides(f.v, f.lambdas, 0, bx, by, sv[0], kX);
  const double scale = bx.norm() * by.norm() * std::pow(max_abs(f.v) + 1.0, 5);
  EXPECT_LE(std::abs(s.lhs), 1e-8 * scale);
  EXPECT_LE(std::abs(s.rhs), 1e-8 * scale);
}

TEST(Theorem2, DimensionMismatch) {
  const oracle::Fixture f = oracle::two_mode(3, 2, 2);
  const auto sv = s_vectors_from_S(f.s, kX);
  EXPECT_THROW((void)theorem2_sides(f.v, f.lambdas, 0, ComplexMatrix::Zero(4, 4), ComplexMatrix::Zero(4, 3),
                                    sv[0], kX),
               Error);
}

TEST(Corollary2, DegenerateFixtureReferenceMatrix) {
  const oracle::Fixture f = oracle::degenerate(1.0);
  const auto sv = s_vectors_from_S(f.s, kX);
  const std::vector<Index> group{0, 2};  // λ = 1/2
  const std::vector<Index> ks{2, 4};
  const IdentitySides s = corollary2_sides(f.v, f.lambdas, group, ks, ks, sv, kX);
  EXPECT_LE(s.relative_error(), 1e-6);
  EXPECT_GT(std::abs(s.lhs), 1e-3);
  for (Index k0 = 0; k0 < 6; ++k0) {
    for (Index k1 = k0 + 1; k1 < 6; ++k1) {
      for (Index l0 = 0; l0 < 6; ++l0) {
        for (Index l1 = l0 + 1; l1 < 6; ++l1) {
          const std::vector<Index> k{k0, k1}, l{l0, l1};
          EXPECT_LE(corollary2_sides(f.v, f.lambdas, group, k, l, sv, kX).relative_error(), 1e-6);
        }
      }
    }
  }
}

TEST(Corollary2, SingletonGroupIsTheorem1) {
  std::mt19937_64 rng(6);
  const oracle::Instance in = oracle::random_instance(3, rng);
  const auto sv = s_vectors_from_S(in.s, kX);
  for (Index m = 0; m < 3; ++m) {
    const std::vector<Index> group{m}, k{1}, l{4};
    const IdentitySides c = corollary2_sides(in.v, in.lambdas, group, k, l, sv, kX);
    const IdentitySides t = theorem1_sides(in.v, in.lambdas, m, 1, 4, sv[m], kX);
    EXPECT_LE(std::abs(c.lhs - t.lhs), 1e-12 * std::max(1.0, std::abs(t.lhs)));
    EXPECT_LE(std::abs(c.rhs - t.rhs), 1e-10 * std::max(1.0, std::abs(t.rhs)));
  }
}

TEST(Corollary2, ConstructedDoubleDegeneracy) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const oracle::Instance in = with_spectrum({2.7, 1.3, 1.3, 0.6}, rng);
    const auto sv = s_vectors_from_S(in.s, kX);
    const std::vector<Index> group{1, 2};
    std::uniform_int_distribution<Index> pick(0, 7);
    Index k0 = pick(rng), k1 = pick(rng), l0 = pick(rng), l1 = pick(rng);
    if (k0 == k1) k1 = (k1 + 1) % 8;
    if (l0 == l1) l1 = (l1 + 3) % 8;
    const std::vector<Index> k{k0, k1}, l{l0, l1};
    EXPECT_LE(corollary2_sides(in.v, in.lambdas, group, k, l, sv, kX).relative_error(), 1e-6) << trial;
  }
}

TEST(Corollary2, InvariantUnderUnitaryRemix) {
  const oracle::Fixture f = oracle::degenerate(1.0);
  const auto sv = s_vectors_from_S(f.s, kX);
  const double th = 0.83, ph = 1.9;
  Eigen::Matrix2cd u;
  u << std::cos(th), std::sin(th) * std::polar(1.0, ph), -std::sin(th) * std::polar(1.0, -ph), std::cos(th);
  std::vector<SVector> mixed = sv;
  mixed[0].entries = u(0, 0) * sv[0].entries + u(0, 1) * sv[2].entries;
  mixed[2].entries = u(1, 0) * sv[0].entries + u(1, 1) * sv[2].entries;
  // The remixed rows still diagonalise V.
  const RealMatrix s2 = extract_S(mixed, kX);
  EXPECT_LE(oracle::symplectic_defect(s2), 1e-12);
  EXPECT_LE(oracle::williamson_residual(f.v, s2, f.lambdas), 1e-12);
  const std::vector<Index> group{0, 2}, k{0, 3}, l{1, 4};
  const IdentitySides a = corollary2_sides(f.v, f.lambdas, group, k, l, sv, kX);
  const IdentitySides b = corollary2_sides(f.v, f.lambdas, group, k, l, mixed, kX);
  EXPECT_LE(std::abs(a.rhs - b.rhs), 1e-12 * std::max(1.0, std::abs(a.rhs)));
}

TEST(Corollary2, SetSizeMismatch) {
  const oracle::Fixture f = oracle::degenerate(1.0);
  const auto sv = s_vectors_from_S(f.s, kX);
  const std::vector<Index> group{0, 2}, k{0}, l{1, 2};
  EXPECT_THROW((void)corollary2_sides(f.v, f.lambdas, group, k, l, sv, kX), Error);
}

TEST(Corollary1, RandomRectangularBases) {
  std::mt19937_64 rng(8);
  const oracle::Fixture f = oracle::degenerate(1.0);
  const auto sv = s_vectors_from_S(f.s, kX);
  const std::vector<Index> group{0, 2};
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix bx = random_complex(6, 4, rng), by = random_complex(6, 4, rng);
    EXPECT_LE(corollary1_sides(f.v, f.lambdas, group, bx, by, sv, kX).relative_error(), 1e-6);
  }
  const oracle::Instance in = with_spectrum({2.1, 0.9, 0.9}, rng);
  const auto sv2 = s_vectors_from_S(in.s, kX);
  const std::vector<Index> g2{1, 2};
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix bx = random_complex(6, 4, rng), by = random_complex(6, 4, rng);
    EXPECT_LE(corollary1_sides(in.v, in.lambdas, g2, bx, by, sv2, kX).relative_error(), 1e-6);
  }
}

TEST(Corollary1, SingletonIsTheorem2) {
  std::mt19937_64 rng(9);
  const oracle::Instance in = oracle::random_instance(2, rng);
  const auto sv = s_vectors_from_S(in.s, kX);
  const ComplexMatrix bx = random_complex(4, 3, rng), by = random_complex(4, 3, rng);
  const std::vector<Index> group{1};
  const IdentitySides a = corollary1_sides(in.v, in.lambdas, group, bx, by, sv, kX);
  const IdentitySides b = theorem2_sides(in.v, in.lambdas, 1, bx, by, sv[1], kX);
  EXPECT_LE(std::abs(a.rhs - b.rhs), 1e-10 * std::max(1.0, std::abs(b.rhs)));
}

}  // namespace
