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

// Decompose a two-mode squeezed thermal state, check the result against the
// eigenvector method, then handle a degenerate three-mode state.

#include <iostream>

#include "symdet/symdet.hpp"

int main() {
  using namespace symdet;

  const double a = 3.0, b = 2.0, c = 2.0;
  RealMatrix v(4, 4);
  v << a, 0, c, 0,
       0, a, 0, -c,
       c, 0, b, 0,
       0, -c, 0, b;
  const CovMatrix cov(v, Ordering::kInterleaved);

  const WilliamsonDecomp det = decompose_det(cov);
  std::cout << "symplectic eigenvalues:";
  for (double l : det.lambdas) std::cout << ' ' << l;
  std::cout << "\nresiduals: symp " << det.residual_symp << ", rec " << det.residual_rec << '\n';

  const WilliamsonDecomp base = decompose_baseline(cov);
  std::cout << "distance to the eigenvector method, up to phases: "
            << gauge_distance(det.S, base.S, det.lambdas) << '\n';

  // λ = (2, 0.5, 0.5): decompose_det refuses, decompose() perturbs and extrapolates.
  RealMatrix w(6, 6);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) w(i, j) = (i % 2 != j % 2) ? 0.0 : (i == j ? 1.0 : 0.5);
  }
  const CovMatrix degenerate(w);
  const WilliamsonDecomp p = decompose(degenerate);
  std::cout << "degenerate case: eps " << p.epsilon << ", residuals " << p.residual_symp << ' '
            << p.residual_rec << '\n';
  return 0;
}
