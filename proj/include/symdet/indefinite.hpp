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

// Symplectic diagonalisation of symmetric matrices that need not be positive
// definite. Symplectic eigenvalues may then be negative or complex, and a
// diagonalising symplectic need not exist.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "symdet/detdiag.hpp"
#include "symdet/error.hpp"
#include "symdet/matcore.hpp"
#include "symdet/sympbase.hpp"
#include "symdet/sympeig.hpp"

namespace symdet {

struct IndefiniteOptions {
  double tol = 1e-8;
  double tau_deg = kDefaultDegeneracyTol;
  double tau_pivot = 1e-10;
  double tau_zero = 1e-12;   // |λ⁺| below tau_zero · ‖V‖_max counts as zero
  double tau_imag = 1e-7;    // |Im ℷ| above tau_imag · |ℷ| is flagged
  KbarPolicy kbar_policy = KbarPolicy::kPerMode;
  Index fixed_kbar = 0;
};

struct SignedSpectrum {
  std::vector<Complex> lambdas_plus;  // descending real part
  std::vector<int> signs;             // +1 or −1
  std::vector<Complex> gimel;
  std::vector<Index> kbars;
  std::vector<bool> imag_flags;

  Index modes() const { return static_cast<Index>(lambdas_plus.size()); }
  bool all_real() const {
    return std::none_of(imag_flags.begin(), imag_flags.end(), [](bool b) { return b; });
  }
  /// sign · Re λ⁺, meaningful when every λ⁺ is real.
  std::vector<double> signed_lambdas() const {
    std::vector<double> out;
    for (std::size_t m = 0; m < lambdas_plus.size(); ++m) {
      out.push_back(signs[m] * lambdas_plus[m].real());
    }
    return out;
  }
};

/// The d eigenvalues of iΩV with positive real part (positive imaginary part
/// on the imaginary axis), ordered by descending real part.
inline std::vector<Complex> positive_eigenvalues(const CovMatrix& v, double tau_zero = 1e-12) {
  const Index d = v.modes();
  const ComplexMatrix iov = kI * (omega(v.form()) * v.matrix()).cast<Complex>();
  const Spectrum spec = eigvals(iov, SpectrumKind::kGeneral);
  const double scale = std::max(1e-300, max_abs(v.matrix()));
  std::vector<Complex> plus;
  for (const Complex& z : spec.values) {
    if (std::abs(z) <= tau_zero * scale) {
      throw Error(ErrorCode::kZeroSymplecticEigenvalue,
                  "iΩV has a zero eigenvalue; perturb V before decomposing");
    }
    // Eigenvalues come in ± pairs; the axis test needs a little slack for
    // round-off in Re of purely imaginary pairs.
    const double axis = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z));
    if (z.real() > axis || (std::abs(z.real()) <= axis && z.imag() > 0.0)) plus.push_back(z);
  }
  if (static_cast<Index>(plus.size()) != d) {
    throw Error(ErrorCode::kNumericalBackend,
                "expected " + std::to_string(d) + " positive eigenvalues of iΩV, found " +
                    std::to_string(plus.size()));
  }
  std::sort(plus.begin(), plus.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return plus;
}

/// ℷ_m = det R_{k,k}(V − iλ_m⁺Ω) / (λ_m⁺ ∏_{n≠m} (λ_n⁺² − λ_m⁺²)).
inline Complex gimel(const CovMatrix& v, std::span<const Complex> lambdas_plus, Index m, Index k) {
  if (k < 0 || k >= 2 * v.modes()) throw Error(ErrorCode::kIndexOutOfRange, "k out of range");
  const Complex lm = lambdas_plus[static_cast<std::size_t>(m)];
  const ComplexMatrix a = a_matrix(v.matrix(), lm, v.ordering());
  return determinant(delete_row_col(a, k, k)) / aleph(lambdas_plus, static_cast<std::size_t>(m));
}

inline SignedSpectrum signed_spectrum(const CovMatrix& v, const IndefiniteOptions& opts = {}) {
  SignedSpectrum out;
  out.lambdas_plus = positive_eigenvalues(v, opts.tau_zero);
  const Index d = v.modes();
  const double top = std::abs(out.lambdas_plus.front());
  for (Index m = 0; m + 1 < d; ++m) {
    for (Index n = m + 1; n < d; ++n) {
      if (std::abs(out.lambdas_plus[static_cast<std::size_t>(m)] -
                   out.lambdas_plus[static_cast<std::size_t>(n)]) <= opts.tau_deg * top) {
        throw Error(ErrorCode::kDegenerateSpectrum,
                    "repeated symplectic eigenvalue; perturb V before decomposing");
      }
    }
  }
  const std::span<const Complex> lp(out.lambdas_plus);
  for (Index m = 0; m < d; ++m) {
    const ComplexMatrix a = a_matrix(v.matrix(), lp[static_cast<std::size_t>(m)], v.ordering());
    Index k = opts.fixed_kbar;
    ComplexVector diag;
    if (opts.kbar_policy == KbarPolicy::kPerMode) {
      diag = diagonal_minors(a);
      diag.cwiseAbs().maxCoeff(&k);
    } else {
      diag = ComplexVector::Zero(a.rows());
      diag(k) = determinant(delete_row_col(a, k, k));
    }
    const Complex g = diag(k) / aleph(lp, static_cast<std::size_t>(m));
    out.gimel.push_back(g);
    out.kbars.push_back(k);
    out.signs.push_back(g.real() > 0.0 ? 1 : -1);
    const bool complex_lambda =
        std::abs(lp[static_cast<std::size_t>(m)].imag()) > opts.tau_imag * std::abs(lp[static_cast<std::size_t>(m)]);
    out.imag_flags.push_back(complex_lambda || std::abs(g.imag()) > opts.tau_imag * std::abs(g));
  }
  return out;
}

struct IndefiniteResult {
  bool diagonalizable = false;
  std::optional<WilliamsonDecomp> decomp;
  SignedSpectrum spectrum;
  std::string reason;     // empty when diagonalizable
  Residuals residuals;    // of the candidate S when one was built
};

/// Never throws for a well-formed input that merely fails to be symplectically
/// diagonalisable: that case returns diagonalizable = false with a reason.
inline IndefiniteResult decompose_indefinite(const CovMatrix& v, const IndefiniteOptions& opts = {}) {
  const CovMatrix vw = v.to(Ordering::kInterleaved);
  IndefiniteResult res;
  res.spectrum = signed_spectrum(vw, opts);
  const SignedSpectrum& sp = res.spectrum;
  const Index d = vw.modes();
  for (Index m = 0; m < d; ++m) {
    if (sp.imag_flags[static_cast<std::size_t>(m)]) {
      res.reason = "mode " + std::to_string(m) + ": ℷ or λ⁺ is not real (ℷ = " +
                   format_real(sp.gimel[static_cast<std::size_t>(m)].real()) + " + " +
                   format_real(sp.gimel[static_cast<std::size_t>(m)].imag()) + "i)";
      return res;
    }
  }

  // Modes sorted by signed λ, descending.
  std::vector<double> signed_raw = sp.signed_lambdas();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return signed_raw[static_cast<std::size_t>(a)] > signed_raw[static_cast<std::size_t>(b)];
  });
  std::vector<double> lambdas;
  for (Index i : order) lambdas.push_back(signed_raw[static_cast<std::size_t>(i)]);

  std::vector<SVector> svecs;
  try {
    for (Index m = 0; m < d; ++m) {
      if (opts.kbar_policy == KbarPolicy::kPerMode) {
        svecs.push_back(detail::pivoted_s_vector(vw.matrix(), lambdas, m, Ordering::kInterleaved,
                                                 opts.tau_pivot));
      } else {
        svecs.push_back(detail::fixed_s_vector(vw.matrix(), lambdas, m, opts.fixed_kbar,
                                               Ordering::kInterleaved, opts.tau_pivot));
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNegativeNorm && e.code() != ErrorCode::kPivotFailure) throw;
    res.reason = e.what();
    return res;
  }

  WilliamsonDecomp out;
  out.S = extract_S(svecs, Ordering::kInterleaved);
  out.lambdas = lambdas;
  out.ordering = Ordering::kInterleaved;
  out.method = Method::kDetIndefinite;
  for (const SVector& sv : svecs) out.kbars.push_back(sv.kbar);
  res.residuals = certify(vw.matrix(), out.S, out.lambdas, Ordering::kInterleaved);
  out.residual_symp = res.residuals.symp;
  out.residual_rec = res.residuals.rec;
  if (res.residuals.symp > opts.tol || res.residuals.rec > opts.tol) {
    res.reason = "candidate symplectic fails certification (symp " + format_real(res.residuals.symp) +
                 ", rec " + format_real(res.residuals.rec) + ")";
    return res;
  }
  out.S = reorder(out.S, Ordering::kInterleaved, v.ordering());
  out.ordering = v.ordering();
  res.decomp = std::move(out);
  res.diagonalizable = true;
  return res;
}

}  // namespace symdet
