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

#pragma once

// Eigenvector-based Williamson decomposition, S = D^{-1/2} K V^{1/2}, with K
// orthogonal and built from the eigenvectors of X = V^{1/2} Ω V^{1/2}. This is
// the independent reference for the determinant method.

#include <cmath>
#include <string>
#include <vector>

#include "symdet/error.hpp"
#include "symdet/matcore.hpp"
#include "symdet/svector.hpp"
#include "symdet/sympbase.hpp"

namespace symdet {

struct BaselineWork {
  RealMatrix v_half;               // symmetric PD square root of V
  RealMatrix x;                    // V^{1/2} Ω V^{1/2}, antisymmetric
  RealMatrix k;                    // orthogonal
  std::vector<PairedEigen> pairs;  // (μ_m, x_m), X x_m = iμ_m x_m
};

/// All intermediates in interleaved ordering.
inline BaselineWork baseline_work(const CovMatrix& v) {
  const CovMatrix vi = v.to(Ordering::kInterleaved);
  BaselineWork w;
  w.v_half = sqrt_sym_pd(vi.matrix());
  w.x = w.v_half * omega(vi.form()) * w.v_half;
  w.x = 0.5 * (w.x - w.x.transpose()).eval();
  w.pairs = eigvecs_paired(w.x);
  const Index n = w.x.rows();
  // Kᵀ = √2 (−Im x₁  Re x₁  …  −Im x_d  Re x_d)
  RealMatrix kt(n, n);
  for (std::size_t m = 0; m < w.pairs.size(); ++m) {
    const ComplexVector& xm = w.pairs[m].vector;
    kt.col(2 * static_cast<Index>(m)) = -std::sqrt(2.0) * xm.imag();
    kt.col(2 * static_cast<Index>(m) + 1) = std::sqrt(2.0) * xm.real();
  }
  w.k = kt.transpose();
  return w;
}

/// ‖K X⁻¹ Kᵀ − ⊕(−1/λ_m)ω‖_max, with X⁻¹Kᵀ obtained from a linear solve.
inline double kxk_residual(const BaselineWork& w) {
  const Index d = w.x.rows() / 2;
  const RealMatrix y = w.x.partialPivLu().solve(w.k.transpose());
  RealMatrix target = RealMatrix::Zero(2 * d, 2 * d);
  for (Index m = 0; m < d; ++m) {
    const double inv = 1.0 / w.pairs[static_cast<std::size_t>(m)].mu;
    target(2 * m, 2 * m + 1) = -inv;
    target(2 * m + 1, 2 * m) = inv;
  }
  return max_abs(RealMatrix(w.k * y - target));
}

/// Requires V positive definite. Modes come out with λ descending.
inline WilliamsonDecomp decompose_baseline(const CovMatrix& v, double tol = 1e-8) {
  const BaselineWork w = baseline_work(v);
  const Index d = v.modes();
  WilliamsonDecomp out;
  out.method = Method::kBaseline;
  out.ordering = Ordering::kInterleaved;
  RealVector inv_sqrt(2 * d);
  for (Index m = 0; m < d; ++m) {
    const double mu = w.pairs[static_cast<std::size_t>(m)].mu;
    out.lambdas.push_back(mu);
    inv_sqrt(2 * m) = inv_sqrt(2 * m + 1) = 1.0 / std::sqrt(mu);
  }
  out.S = inv_sqrt.asDiagonal() * w.k * w.v_half;
  const Residuals r = certify(v.to(Ordering::kInterleaved).matrix(), out.S, out.lambdas,
                              Ordering::kInterleaved);
  out.residual_symp = r.symp;
  out.residual_rec = r.rec;
  if (r.symp > tol || r.rec > tol) {
    throw Error(ErrorCode::kCertificationFailed,
                "baseline decomposition failed certification (symp " + format_real(r.symp) +
                    ", rec " + format_real(r.rec) + ")");
  }
  out.S = reorder(out.S, Ordering::kInterleaved, v.ordering());
  out.ordering = v.ordering();
  return out;
}

}  // namespace symdet
