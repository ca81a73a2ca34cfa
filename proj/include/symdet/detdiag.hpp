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

// Williamson decomposition from submatrix determinants.
//
// For a non-degenerate spectrum, the diagonalising symplectic S is read off
// the minors of A_m = V − iλ_mΩ:
//
//   det R_{k,l}(A_m) = (−1)^{k+l} s*_{m,k} s_{m,l} · ℵ_m,
//   ℵ_m = λ_m ∏_{n≠m} (λ_n² − λ_m²),
//
// so one row of minors per mode (row k̄) fixes s_m up to a phase, which is
// chosen to make s_{m,k̄} real positive.

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <span>
#include <string>
#include <vector>

#include "symdet/error.hpp"
#include "symdet/matcore.hpp"
#include "symdet/svector.hpp"
#include "symdet/sympbase.hpp"
#include "symdet/sympeig.hpp"

namespace symdet {

enum class KbarPolicy {
  kPerMode,  // each mode pivots on its largest diagonal minor
  kFixed,    // one k̄ for all modes, advanced cyclically on pivot failure
};

struct DetOptions {
  double tol = 1e-8;
  double tau_deg = kDefaultDegeneracyTol;
  double tau_pivot = 1e-10;
  KbarPolicy kbar_policy = KbarPolicy::kPerMode;
  Index fixed_kbar = 0;
  bool native_ordering = false;  // run in the input ordering instead of xpxp
  unsigned threads = 1;
};

/// A = V − iλΩ.
inline ComplexMatrix a_matrix(const RealMatrix& v, Complex lambda, Ordering o) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0 || v.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "a_matrix needs a 2d x 2d matrix");
  }
  return v.cast<Complex>() - kI * lambda * omega({v.rows() / 2, o}).cast<Complex>();
}

/// ℶ_{k̄,l} = det R_{k̄,l}(A) for every column l.
struct MinorTable {
  Index mode = 0;
  Index kbar = 0;
  ComplexVector values;
  double pivot_imag = 0.0;  // |Im ℶ_{k̄k̄}| relative to the row scale

  Complex pivot() const { return values(kbar); }
};

inline ComplexVector diagonal_minors(const ComplexMatrix& a) {
  ComplexVector out(a.rows());
  for (Index k = 0; k < a.rows(); ++k) out(k) = determinant(delete_row_col(a, k, k));
  return out;
}

/// Throws kPivotFailure when |ℶ_{k̄k̄}| <= tau_pivot · max_l |ℶ_{k̄l}|, or when
/// the whole row is round-off: max_l |ℶ_{k̄l}| <= tau_pivot · σ₁⋯σ_{n−1}, the
/// product of the n−1 largest singular values of A, which bounds every minor
/// of order n−1. The caller should retry with another k̄.
inline MinorTable minor_row(const ComplexMatrix& a, Index mode, Index kbar,
                            double tau_pivot = 1e-10) {
  if (kbar < 0 || kbar >= a.rows()) {
    throw Error(ErrorCode::kIndexOutOfRange, "k̄ out of range");
  }
  MinorTable t;
  t.mode = mode;
  t.kbar = kbar;
  t.values.resize(a.cols());
  for (Index l = 0; l < a.cols(); ++l) t.values(l) = determinant(delete_row_col(a, kbar, l));
  const double scale = max_abs(t.values);
  const RealVector sigma = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
  const double bound = sigma.head(a.rows() - 1).prod();
  if (!(std::abs(t.pivot()) > tau_pivot * scale) || !(scale > tau_pivot * bound)) {
    throw Error(ErrorCode::kPivotFailure,
                "pivot minor vanishes for mode " + std::to_string(mode) + " at k̄=" + std::to_string(kbar));
  }
  t.pivot_imag = std::abs(t.pivot().imag()) / scale;
  return t;
}

inline MinorTable minor_row(const RealMatrix& v, Complex lambda, Index mode, Index kbar,
                            Ordering o, double tau_pivot = 1e-10) {
  return minor_row(a_matrix(v, lambda, o), mode, kbar, tau_pivot);
}

/// s_{m,k̄} = √(ℶ_{k̄k̄}/ℵ_m) and s_{m,l} = (−1)^{k̄+l} ℶ_{k̄l} / (ℵ_m s_{m,k̄}).
inline SVector s_vector(const MinorTable& minors, double aleph_m) {
  if (aleph_m == 0.0 || !std::isfinite(aleph_m)) {
    throw Error(ErrorCode::kDegenerateSpectrum,
                "ℵ vanishes for mode " + std::to_string(minors.mode));
  }
  // ℶ_{k̄k̄} is real in exact arithmetic; drop the round-off imaginary part.
  const double ratio = minors.pivot().real() / aleph_m;
  if (!(ratio > 0.0)) {
    throw Error(ErrorCode::kNegativeNorm,
                "|s_{m,k̄}|² came out non-positive for mode " + std::to_string(minors.mode));
  }
  const double pivot_entry = std::sqrt(ratio);
  SVector sv;
  sv.mode = minors.mode;
  sv.kbar = minors.kbar;
  sv.entries.resize(minors.values.size());
  for (Index l = 0; l < minors.values.size(); ++l) {
    const double sign = ((minors.kbar + l) % 2 == 0) ? 1.0 : -1.0;
    sv.entries(l) = sign * minors.values(l) / (aleph_m * pivot_entry);
  }
  sv.entries(minors.kbar) = Complex(pivot_entry, 0.0);
  return sv;
}

namespace detail {

// s-vector of one mode with a k̄ chosen by the largest diagonal minor.
// `lambdas` may carry signs (indefinite inputs).
inline SVector pivoted_s_vector(const RealMatrix& v, std::span<const double> lambdas, Index m,
                                Ordering o, double tau_pivot) {
  const double lam = lambdas[static_cast<std::size_t>(m)];
  const ComplexMatrix a = a_matrix(v, lam, o);
  const ComplexVector diag = diagonal_minors(a);
  Index kbar = 0;
  diag.cwiseAbs().maxCoeff(&kbar);
  return s_vector(minor_row(a, m, kbar, tau_pivot), aleph(lambdas, static_cast<std::size_t>(m)));
}

inline SVector fixed_s_vector(const RealMatrix& v, std::span<const double> lambdas, Index m,
                              Index kbar, Ordering o, double tau_pivot) {
  const ComplexMatrix a = a_matrix(v, lambdas[static_cast<std::size_t>(m)], o);
  return s_vector(minor_row(a, m, kbar, tau_pivot), aleph(lambdas, static_cast<std::size_t>(m)));
}

// Runs fn(m) for every mode, optionally across threads. Each mode is
// independent, so the result does not depend on the thread count.
template <class Fn>
std::vector<SVector> for_each_mode(Index d, unsigned threads, Fn fn) {
  std::vector<SVector> out(static_cast<std::size_t>(d));
  if (threads <= 1 || d == 1) {
    for (Index m = 0; m < d; ++m) out[static_cast<std::size_t>(m)] = fn(m);
    return out;
  }
  const Index workers = std::min<Index>(threads, d);
  std::vector<std::future<void>> jobs;
  for (Index w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (Index m = w; m < d; m += workers) out[static_cast<std::size_t>(m)] = fn(m);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace detail

/// Diagonalising symplectic of a positive-definite V with a non-degenerate
/// symplectic spectrum. Throws kDegenerateSpectrum for degenerate spectra
/// (see decompose() in degenerate.hpp for the perturbative route).
inline WilliamsonDecomp decompose_det(const CovMatrix& v, const DetOptions& opts = {}) {
  const Ordering work = opts.native_ordering ? v.ordering() : Ordering::kInterleaved;
  const CovMatrix vw = v.to(work);
  const SympSpectrum spec = symplectic_eigenvalues(vw, opts.tau_deg);
  if (spec.degenerate()) {
    throw Error(ErrorCode::kDegenerateSpectrum,
                "degenerate symplectic spectrum (" + std::to_string(spec.degenerate_groups().size()) +
                    " repeated group(s))");
  }
  const Index d = vw.modes();
  const RealMatrix& m = vw.matrix();
  const std::span<const double> lambdas(spec.lambdas);

  std::vector<SVector> svecs;
  if (opts.kbar_policy == KbarPolicy::kPerMode) {
    svecs = detail::for_each_mode(d, opts.threads, [&](Index mode) {
      return detail::pivoted_s_vector(m, lambdas, mode, work, opts.tau_pivot);
    });
  } else {
    bool done = false;
    for (Index attempt = 0; attempt < 2 * d && !done; ++attempt) {
      const Index kbar = (opts.fixed_kbar + attempt) % (2 * d);
      try {
        svecs = detail::for_each_mode(d, opts.threads, [&](Index mode) {
          return detail::fixed_s_vector(m, lambdas, mode, kbar, work, opts.tau_pivot);
        });
        done = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kPivotFailure) throw;
      }
    }
    if (!done) throw Error(ErrorCode::kPivotFailure, "no k̄ gives a usable pivot for every mode");
  }

  WilliamsonDecomp out;
  out.S = extract_S(svecs, work);
  out.lambdas = spec.lambdas;
  out.ordering = work;
  out.method = Method::kDet;
  for (const SVector& sv : svecs) out.kbars.push_back(sv.kbar);
  const Residuals r = certify(m, out.S, out.lambdas, work);
  out.residual_symp = r.symp;
  out.residual_rec = r.rec;
  if (r.symp > opts.tol) {
    throw Error(ErrorCode::kNotSymplectic,
                "symplectic residual " + format_real(r.symp) + " exceeds tolerance");
  }
  if (r.rec > opts.tol) {
    throw Error(ErrorCode::kCertificationFailed,
                "reconstruction residual " + format_real(r.rec) + " exceeds tolerance");
  }
  out.S = reorder(out.S, work, v.ordering());
  out.ordering = v.ordering();
  return out;
}

}  // namespace symdet
