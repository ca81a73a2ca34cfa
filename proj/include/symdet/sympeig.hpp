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

// Symplectic eigenvalues and degeneracy analysis.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "symdet/error.hpp"
#include "symdet/matcore.hpp"
#include "symdet/sympbase.hpp"

namespace symdet {

inline constexpr double kDefaultDegeneracyTol = 1e-8;

struct SympSpectrum {
  std::vector<double> lambdas;             // sorted descending
  RealMatrix gaps;                         // |λ_n² − λ_m²|
  std::vector<std::vector<Index>> groups;  // partition of modes; size > 1 means degenerate
  double tau_deg = kDefaultDegeneracyTol;

  bool degenerate() const {
    return std::any_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() > 1; });
  }

  std::vector<std::vector<Index>> degenerate_groups() const {
    std::vector<std::vector<Index>> out;
    for (const auto& g : groups) {
      if (g.size() > 1) out.push_back(g);
    }
    return out;
  }
};

/// Sorts descending and groups consecutive values closer than tau_deg · max|λ|.
inline SympSpectrum make_spectrum(std::vector<double> lambdas, double tau_deg = kDefaultDegeneracyTol) {
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  SympSpectrum spec;
  spec.tau_deg = tau_deg;
  const Index d = static_cast<Index>(lambdas.size());
  spec.gaps = RealMatrix::Zero(d, d);
  double scale = 0.0;
  for (Index m = 0; m < d; ++m) {
    scale = std::max(scale, std::abs(lambdas[static_cast<std::size_t>(m)]));
    for (Index n = 0; n < d; ++n) {
      const double lm = lambdas[static_cast<std::size_t>(m)];
      const double ln = lambdas[static_cast<std::size_t>(n)];
      spec.gaps(m, n) = std::abs(ln * ln - lm * lm);
    }
  }
  for (Index m = 0; m < d; ++m) {
    if (m > 0 && std::abs(lambdas[static_cast<std::size_t>(m - 1)] - lambdas[static_cast<std::size_t>(m)]) <=
                     tau_deg * scale) {
      spec.groups.back().push_back(m);
    } else {
      spec.groups.push_back({m});
    }
  }
  spec.lambdas = std::move(lambdas);
  return spec;
}

/// Symplectic eigenvalues of a positive-definite V, from the Hermitian matrix
/// V^{1/2}(iΩ)V^{1/2}, which is similar to iΩV.
inline SympSpectrum symplectic_eigenvalues(const CovMatrix& v, double tau_deg = kDefaultDegeneracyTol) {
  Eigen::LLT<RealMatrix> llt(v.matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "covariance matrix is not positive definite");
  }
  const RealMatrix root = sqrt_sym_pd(v.matrix());
  ComplexMatrix h = kI * (root * omega(v.form()) * root).cast<Complex>();
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalBackend, "Hermitian eigensolver failed");
  }
  const Index d = v.modes();
  std::vector<double> lambdas;
  for (Index m = 0; m < d; ++m) {
    // ±λ pairs: average the two halves of the ascending spectrum.
    const double hi = es.eigenvalues()(2 * d - 1 - m);
    const double lo = es.eigenvalues()(m);
    const double lam = 0.5 * (hi - lo);
    if (!(hi > 0.0) || !(lo < 0.0)) {
      throw Error(ErrorCode::kZeroSymplecticEigenvalue, "zero eigenvalue of iΩV");
    }
    lambdas.push_back(lam);
  }
  return make_spectrum(std::move(lambdas), tau_deg);
}

/// ℵ_m = λ_m ∏_{n≠m} (λ_n² − λ_m²).
template <class T>
T aleph(std::span<const T> lambdas, std::size_t m) {
  const T lm = lambdas[m];
  T out = lm;
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    if (n != m) out *= lambdas[n] * lambdas[n] - lm * lm;
  }
  return out;
}

inline double aleph(const SympSpectrum& spec, std::size_t m) {
  return aleph(std::span<const double>(spec.lambdas), m);
}

}  // namespace symdet
