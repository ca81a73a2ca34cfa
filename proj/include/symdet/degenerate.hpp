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

// Degenerate spectra: decompose V + εΔ at two magnitudes, align the two
// results modulo gauge, extrapolate linearly to ε → 0, then certify the
// extrapolated S against the unperturbed V.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symdet/detdiag.hpp"
#include "symdet/error.hpp"
#include "symdet/matcore.hpp"
#include "symdet/sympbase.hpp"
#include "symdet/sympeig.hpp"

namespace symdet {

enum class PerturbStrategy { kGradedDiagonal, kSeededRandomDiagonal, kUser };

constexpr std::string_view to_string(PerturbStrategy s) {
  switch (s) {
    case PerturbStrategy::kGradedDiagonal: return "graded-diagonal";
    case PerturbStrategy::kSeededRandomDiagonal: return "seeded-random-diagonal";
    case PerturbStrategy::kUser: return "user";
  }
  return "user";
}

inline constexpr double kDefaultRelativeEpsilon = 1e-6;

struct PerturbPlan {
  RealMatrix delta;               // in the ordering of the matrix it perturbs
  std::vector<double> epsilons;   // the pair (ε, ε/2) used for extrapolation
  PerturbStrategy strategy = PerturbStrategy::kGradedDiagonal;
  std::uint64_t seed = 0;         // seeds the random-diagonal fallback
};

inline double default_epsilon(const CovMatrix& v) {
  return kDefaultRelativeEpsilon * std::max(1e-300, max_abs(v.matrix()));
}

/// Δ = ⊕_m (m+1)·I₂. Positive semidefinite, so PD inputs stay PD.
inline PerturbPlan make_plan(const CovMatrix& v, std::uint64_t seed = 0,
                             std::optional<double> epsilon = std::nullopt) {
  const Index d = v.modes();
  std::vector<double> weights(static_cast<std::size_t>(d));
  std::iota(weights.begin(), weights.end(), 1.0);
  const double eps = epsilon.value_or(default_epsilon(v));
  return {williamson_form(weights, v.ordering()), {eps, eps / 2}, PerturbStrategy::kGradedDiagonal, seed};
}

/// Δ = diag(1 + u_i), u_i uniform in [0, 1), one draw per quadrature.
inline PerturbPlan random_plan(const CovMatrix& v, std::uint64_t seed,
                               std::optional<double> epsilon = std::nullopt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RealVector diag(2 * v.modes());
  for (Index i = 0; i < diag.size(); ++i) diag(i) = 1.0 + unif(rng);
  const double eps = epsilon.value_or(default_epsilon(v));
  return {diag.asDiagonal(), {eps, eps / 2}, PerturbStrategy::kSeededRandomDiagonal, seed};
}

/// Caller-chosen symmetric Δ.
inline PerturbPlan user_plan(const RealMatrix& delta, double epsilon, std::uint64_t seed = 0) {
  if (delta.rows() != delta.cols() || max_abs(RealMatrix(delta - delta.transpose())) > 1e-12 * max_abs(delta)) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation direction must be square and symmetric");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ε must be positive");
  return {0.5 * (delta + delta.transpose()), {epsilon, epsilon / 2}, PerturbStrategy::kUser, seed};
}

struct DegenerateOptions {
  DetOptions det;
  double tol_deg = 1e-6;
};

struct Extrapolation {
  RealMatrix S;                 // rows ordered to match `lambdas`
  std::vector<double> lambdas;  // extrapolated, descending
  double alignment_distance = 0.0;
};

namespace detail {

inline WilliamsonDecomp perturbed_run(const CovMatrix& v, const RealMatrix& delta, double eps,
                                      const DegenerateOptions& opts) {
  DetOptions inner = opts.det;
  inner.tol = std::max(opts.det.tol, opts.tol_deg);
  inner.native_ordering = true;
  return decompose_det(CovMatrix(RealMatrix(v.matrix() + eps * delta), v.ordering()), inner);
}

}  // namespace detail

/// Two-point linear extrapolation S₀ = 2·S(ε₂) − S(ε₁) with ε₂ = ε₁/2 (or any
/// ε₂ < ε₁, weights adjusted), after aligning S(ε₂) onto S(ε₁) by gauge and
/// nearest-λ mode matching.
inline Extrapolation extrapolate(const CovMatrix& v, const RealMatrix& delta, double eps1,
                                 double eps2, const DegenerateOptions& opts = {}) {
  if (!(eps1 > eps2 && eps2 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "extrapolation needs ε₁ > ε₂ > 0");
  }
  const WilliamsonDecomp far = detail::perturbed_run(v, delta, eps1, opts);
  const WilliamsonDecomp near = detail::perturbed_run(v, delta, eps2, opts);
  const Ordering o = v.ordering();

  // Nearest-λ matching: allow pairs whose λ moved by up to twice the largest
  // index-wise shift between the two runs.
  double shift = 0.0, scale = 0.0;
  for (std::size_t m = 0; m < far.lambdas.size(); ++m) {
    shift = std::max(shift, std::abs(far.lambdas[m] - near.lambdas[m]));
    scale = std::max(scale, std::abs(far.lambdas[m]));
  }
  const double match_tol = (2.0 * shift + 1e-6 * scale) / scale;
  const GaugeAlignment al = gauge_align(near.S, near.lambdas, far.S, far.lambdas, o, match_tol);

  // f(0) = (ε₁ f(ε₂) − ε₂ f(ε₁)) / (ε₁ − ε₂)
  const double w_near = eps1 / (eps1 - eps2);
  const double w_far = -eps2 / (eps1 - eps2);
  const Index d = v.modes();
  RealMatrix s0 = w_near * al.aligned + w_far * far.S;
  std::vector<double> lam0(static_cast<std::size_t>(d));
  for (Index m = 0; m < d; ++m) {
    lam0[static_cast<std::size_t>(m)] =
        w_near * near.lambdas[static_cast<std::size_t>(al.permutation[static_cast<std::size_t>(m)])] +
        w_far * far.lambdas[static_cast<std::size_t>(m)];
  }
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return lam0[static_cast<std::size_t>(a)] > lam0[static_cast<std::size_t>(b)];
  });
  Extrapolation out;
  out.S.resize(2 * d, 2 * d);
  out.alignment_distance = al.distance;
  for (Index j = 0; j < d; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    const auto [s0r, s1r] = mode_rows(src, d, o);
    const auto [t0r, t1r] = mode_rows(j, d, o);
    out.S.row(t0r) = s0.row(s0r);
    out.S.row(t1r) = s0.row(s1r);
    out.lambdas.push_back(lam0[static_cast<std::size_t>(src)]);
  }
  return out;
}

/// Decomposition of a (possibly) degenerate V. Non-degenerate inputs go
/// straight to decompose_det with ε = 0. When `plan` does not break every
/// degeneracy, a seeded random-diagonal plan is tried before giving up.
inline WilliamsonDecomp decompose_perturbed(const CovMatrix& v, const PerturbPlan& plan,
                                            const DegenerateOptions& opts = {}) {
  const SympSpectrum spec = symplectic_eigenvalues(v, opts.det.tau_deg);
  if (!spec.degenerate()) return decompose_det(v, opts.det);
  if (plan.delta.rows() != v.matrix().rows() || plan.delta.cols() != v.matrix().cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "perturbation direction has the wrong size");
  }
  if (plan.epsilons.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "plan needs two trial magnitudes");
  }

  std::vector<PerturbPlan> attempts{plan};
  if (plan.strategy != PerturbStrategy::kSeededRandomDiagonal) {
    attempts.push_back(random_plan(v, plan.seed, plan.epsilons[0]));
  }
  for (const PerturbPlan& p : attempts) {
    Extrapolation ex;
    try {
      ex = extrapolate(v, p.delta, p.epsilons[0], p.epsilons[1], opts);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kDegenerateSpectrum) continue;
      throw;
    }
    WilliamsonDecomp out;
    out.S = std::move(ex.S);
    out.lambdas = spec.lambdas;
    out.ordering = v.ordering();
    out.method = Method::kDetPerturbed;
    out.epsilon = p.epsilons[0];
    const Residuals r = certify(v.matrix(), out.S, out.lambdas, out.ordering);
    out.residual_symp = r.symp;
    out.residual_rec = r.rec;
    if (r.symp > opts.tol_deg || r.rec > opts.tol_deg) {
      throw Error(ErrorCode::kCertificationFailed,
                  "extrapolated symplectic does not diagonalise V (symp " + format_real(r.symp) +
                      ", rec " + format_real(r.rec) + ")");
    }
    return out;
  }
  throw Error(ErrorCode::kDegeneracyNotBroken, "no perturbation strategy lifted the degeneracy");
}

/// decompose_det, routed through the default perturbation plan when the
/// spectrum is degenerate.
inline WilliamsonDecomp decompose(const CovMatrix& v, const DegenerateOptions& opts = {},
                                  std::uint64_t seed = 0,
                                  std::optional<double> epsilon = std::nullopt) {
  const SympSpectrum spec = symplectic_eigenvalues(v, opts.det.tau_deg);
  if (!spec.degenerate()) return decompose_det(v, opts.det);
  return decompose_perturbed(v, make_plan(v, seed, epsilon), opts);
}

}  // namespace symdet
