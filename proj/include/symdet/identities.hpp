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

// Determinant identities linking minors of A_m = V − iλ_mΩ to the s-vectors.
// These are check surfaces for tests and diagnostics; the decomposition
// pipeline does not use them.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "symdet/detdiag.hpp"
#include "symdet/error.hpp"
#include "symdet/matcore.hpp"
#include "symdet/svector.hpp"
#include "symdet/sympbase.hpp"

namespace symdet {

struct IdentitySides {
  Complex lhs;
  Complex rhs;

  /// |lhs − rhs| / max(|lhs|, |rhs|, floor).
  double relative_error(double floor = 1.0) const {
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), floor});
  }
};

/// (B  v₁ … v_p): a 2d x (2d−p) base with p columns appended.
struct ConcatMatrix {
  ComplexMatrix base;
  std::vector<ComplexVector> appended;

  ComplexMatrix realise() const {
    const Index n = base.rows();
    if (base.cols() + static_cast<Index>(appended.size()) != n) {
      throw Error(ErrorCode::kDimensionMismatch, "concatenation is not square");
    }
    ComplexMatrix out(n, n);
    out.leftCols(base.cols()) = base;
    for (std::size_t j = 0; j < appended.size(); ++j) {
      if (appended[j].size() != n) {
        throw Error(ErrorCode::kDimensionMismatch, "appended vector has the wrong length");
      }
      out.col(base.cols() + static_cast<Index>(j)) = appended[j];
    }
    return out;
  }
};

/// M_l: the n x (n−1) identity with a zero row inserted at position l, so that
/// M_k† A M_l = R_{k,l}(A).
inline ComplexMatrix selector(Index n, Index l) {
  if (l < 0 || l >= n) throw Error(ErrorCode::kIndexOutOfRange, "selector row out of range");
  ComplexMatrix m = ComplexMatrix::Zero(n, n - 1);
  for (Index j = 0; j < n - 1; ++j) m(j < l ? j : j + 1, j) = 1.0;
  return m;
}

namespace detail {

inline double outside_product(std::span<const double> lambdas, double lam,
                              std::span<const Index> group) {
  double p = 1.0;
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    if (std::find(group.begin(), group.end(), static_cast<Index>(n)) != group.end()) continue;
    p *= lambdas[n] * lambdas[n] - lam * lam;
  }
  return p;
}

inline void check_mode(std::span<const double> lambdas, Index m) {
  if (m < 0 || m >= static_cast<Index>(lambdas.size())) {
    throw Error(ErrorCode::kIndexOutOfRange, "mode index out of range");
  }
}

}  // namespace detail

/// det R_{k,l}(A_m) against (−1)^{k+l} s*_{m,k} s_{m,l} ℵ_m.
inline IdentitySides theorem1_sides(const RealMatrix& v, std::span<const double> lambdas, Index m,
                                    Index k, Index l, const SVector& s_m, Ordering o) {
  detail::check_mode(lambdas, m);
  const ComplexMatrix a = a_matrix(v, lambdas[static_cast<std::size_t>(m)], o);
  const double sign = ((k + l) % 2 == 0) ? 1.0 : -1.0;
  return {determinant(delete_row_col(a, k, l)),
          sign * phase_product(s_m, k, l) * aleph(lambdas, static_cast<std::size_t>(m))};
}

/// det[B_x† A_m B_y] against det[(B_x s_m/√2)]* det[(B_y s_m/√2)] · 2ℵ_m for
/// any pair of 2d x (2d−1) matrices.
inline IdentitySides theorem2_sides(const RealMatrix& v, std::span<const double> lambdas, Index m,
                                    const ComplexMatrix& bx, const ComplexMatrix& by,
                                    const SVector& s_m, Ordering o) {
  detail::check_mode(lambdas, m);
  const Index n = v.rows();
  if (bx.rows() != n || by.rows() != n || bx.cols() != n - 1 || by.cols() != n - 1) {
    throw Error(ErrorCode::kDimensionMismatch, "B_x and B_y must be 2d x (2d-1)");
  }
  const ComplexMatrix a = a_matrix(v, lambdas[static_cast<std::size_t>(m)], o);
  const ComplexVector half = s_m.entries / std::sqrt(2.0);
  const Complex det_x = determinant(ConcatMatrix{bx, {half}}.realise());
  const Complex det_y = determinant(ConcatMatrix{by, {half}}.realise());
  return {determinant(ComplexMatrix(bx.adjoint() * a * by)),
          std::conj(det_x) * det_y * 2.0 * aleph(lambdas, static_cast<std::size_t>(m))};
}

/// p-fold degenerate generalisation of theorem2_sides: B_x, B_y are
/// 2d x (2d−p) and all p s-vectors of the group are appended.
/// `svecs` holds one s-vector per mode of the whole system.
inline IdentitySides corollary1_sides(const RealMatrix& v, std::span<const double> lambdas,
                                      std::span<const Index> group, const ComplexMatrix& bx,
                                      const ComplexMatrix& by, std::span<const SVector> svecs,
                                      Ordering o) {
  const Index p = static_cast<Index>(group.size());
  const Index n = v.rows();
  if (p == 0) throw Error(ErrorCode::kInvalidArgument, "empty degenerate group");
  if (bx.rows() != n || by.rows() != n || bx.cols() != n - p || by.cols() != n - p) {
    throw Error(ErrorCode::kDimensionMismatch, "B_x and B_y must be 2d x (2d-p)");
  }
  for (Index m : group) detail::check_mode(lambdas, m);
  const double lam = lambdas[static_cast<std::size_t>(group[0])];
  const ComplexMatrix a = a_matrix(v, lam, o);
  std::vector<ComplexVector> cols;
  for (Index m : group) cols.push_back(svecs[static_cast<std::size_t>(m)].entries / std::sqrt(2.0));
  const Complex det_x = determinant(ConcatMatrix{bx, cols}.realise());
  const Complex det_y = determinant(ConcatMatrix{by, cols}.realise());
  return {determinant(ComplexMatrix(bx.adjoint() * a * by)),
          std::conj(det_x) * det_y * std::pow(2.0 * lam, static_cast<double>(p)) *
              detail::outside_product(lambdas, lam, group)};
}

/// det R_{{k_j},{l_j}}(A_m) against
/// (−1)^{Σ k_j + l_j} λ^p det[s_{{m_j},{k_j}}]* det[s_{{m_j},{l_j}}] ∏_{n∉{m_j}} (λ_n² − λ²).
/// The group's λ is taken as the mean over the group.
inline IdentitySides corollary2_sides(const RealMatrix& v, std::span<const double> lambdas,
                                      std::span<const Index> group, std::span<const Index> k_set,
                                      std::span<const Index> l_set, std::span<const SVector> svecs,
                                      Ordering o) {
  const Index p = static_cast<Index>(group.size());
  if (p == 0 || static_cast<Index>(k_set.size()) != p || static_cast<Index>(l_set.size()) != p) {
    throw Error(ErrorCode::kInvalidArgument, "corollary2: |{k_j}| = |{l_j}| = p is required");
  }
  // Index sets: column order of the s-submatrices follows the sorted sets.
  std::vector<Index> ks(k_set.begin(), k_set.end()), ls(l_set.begin(), l_set.end());
  std::sort(ks.begin(), ks.end());
  std::sort(ls.begin(), ls.end());
  double lam = 0.0;
  for (Index m : group) {
    detail::check_mode(lambdas, m);
    lam += lambdas[static_cast<std::size_t>(m)];
  }
  lam /= static_cast<double>(p);
  const ComplexMatrix a = a_matrix(v, lam, o);
  ComplexMatrix sk(p, p), sl(p, p);
  Index parity = 0;
  for (Index j = 0; j < p; ++j) parity += ks[static_cast<std::size_t>(j)] + ls[static_cast<std::size_t>(j)];
  for (Index i = 0; i < p; ++i) {
    const ComplexVector& e = svecs[static_cast<std::size_t>(group[static_cast<std::size_t>(i)])].entries;
    for (Index j = 0; j < p; ++j) {
      sk(i, j) = e(ks[static_cast<std::size_t>(j)]);
      sl(i, j) = e(ls[static_cast<std::size_t>(j)]);
    }
  }
  const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
  return {determinant(delete_rows_cols(a, std::span<const Index>(ks), std::span<const Index>(ls))),
          sign * std::pow(lam, static_cast<double>(p)) * std::conj(determinant(sk)) *
              determinant(sl) * detail::outside_product(lambdas, lam, group)};
}

}  // namespace symdet
