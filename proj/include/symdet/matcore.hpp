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

// Dense matrix primitives: minors, determinants, eigenvalue extraction.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "symdet/error.hpp"

namespace symdet {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Passed as a row or column index to delete_row_col to remove nothing.
inline constexpr Index kNone = -1;

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

/// Short scientific rendering for diagnostics ("3.1e-09").
inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

namespace detail {

inline std::vector<Index> kept_indices(Index n, std::span<const Index> removed,
                                       const char* what) {
  std::vector<bool> drop(static_cast<std::size_t>(n), false);
  for (Index r : removed) {
    if (r < 0 || r >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  std::string(what) + " index " + std::to_string(r) +
                      " out of range [0, " + std::to_string(n) + ")");
    }
    if (drop[static_cast<std::size_t>(r)]) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " index " + std::to_string(r) + " repeated");
    }
    drop[static_cast<std::size_t>(r)] = true;
  }
  std::vector<Index> kept;
  kept.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (!drop[static_cast<std::size_t>(i)]) kept.push_back(i);
  }
  return kept;
}

}  // namespace detail

/// Removes every listed row and column (zero-based). R_{{k_j},{l_j}}(M).
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
delete_rows_cols(const Eigen::MatrixBase<Derived>& m, std::span<const Index> rows,
                 std::span<const Index> cols) {
  const auto kr = detail::kept_indices(m.rows(), rows, "row");
  const auto kc = detail::kept_indices(m.cols(), cols, "column");
  return m(kr, kc);
}

/// R_{k,l}(M): M with row `row` and column `col` removed (zero-based).
/// Either index may be kNone.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
delete_row_col(const Eigen::MatrixBase<Derived>& m, Index row, Index col) {
  const Index r[1] = {row};
  const Index c[1] = {col};
  return delete_rows_cols(m, std::span<const Index>(r, row == kNone ? 0 : 1),
                          std::span<const Index>(c, col == kNone ? 0 : 1));
}

/// Determinant by Gaussian elimination with partial pivoting. The empty
/// matrix has determinant 1.
template <class Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "determinant of non-square " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + " matrix");
  }
  const Index n = m.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lu = m;
  Scalar det{1};
  for (Index k = 0; k < n; ++k) {
    Index pivot_row = k;
    lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot_row);
    pivot_row += k;
    const Scalar pivot = lu(pivot_row, k);
    if (pivot == Scalar{0}) return Scalar{0};
    if (pivot_row != k) {
      lu.row(k).swap(lu.row(pivot_row));
      det = -det;
    }
    det *= pivot;
    const Index rest = n - k - 1;
    if (rest > 0) {
      lu.col(k).tail(rest) /= pivot;
      lu.bottomRightCorner(rest, rest).noalias() -=
          lu.col(k).tail(rest) * lu.row(k).tail(rest);
    }
  }
  return det;
}

enum class SpectrumKind {
  kHermitian,  // real spectrum guaranteed; imaginary parts are exactly zero
  kGeneral,
};

struct Spectrum {
  std::vector<Complex> values;
  SpectrumKind kind = SpectrumKind::kGeneral;
};

/// All eigenvalues with multiplicity, in no particular order.
inline Spectrum eigvals(const ComplexMatrix& m, SpectrumKind kind) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "eigvals of non-square matrix");
  }
  Spectrum out;
  out.kind = kind;
  if (m.rows() == 0) return out;
  if (kind == SpectrumKind::kHermitian) {
    const double asym = max_abs(ComplexMatrix(m - m.adjoint()));
    if (asym > 1e-10 * std::max(1.0, max_abs(m))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "Hermitian eigensolver given a non-Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumericalBackend, "Hermitian eigensolver failed");
    }
    for (Index i = 0; i < m.rows(); ++i) out.values.emplace_back(es.eigenvalues()(i), 0.0);
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumericalBackend, "complex eigensolver failed");
    }
    for (Index i = 0; i < m.rows(); ++i) out.values.push_back(es.eigenvalues()(i));
  }
  return out;
}

inline Spectrum eigvals(const RealMatrix& m, SpectrumKind kind) {
  return eigvals(ComplexMatrix(m.cast<Complex>()), kind);
}

/// Eigenpair (i·mu, x) of a real antisymmetric matrix with mu > 0.
struct PairedEigen {
  double mu = 0.0;
  ComplexVector vector;
};

/// Returns the d eigenpairs of a real antisymmetric 2d x 2d matrix whose
/// eigenvalues have positive imaginary part, sorted by mu descending. The
/// conjugate partners (-i·mu, x*) are implied. Each x is unit-norm with its
/// largest-magnitude entry rotated to be real positive.
inline std::vector<PairedEigen> eigvecs_paired(const RealMatrix& x) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "eigvecs_paired needs an even-dimensional square matrix");
  }
  const double scale = max_abs(x);
  if (max_abs(RealMatrix(x + x.transpose())) > 1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorCode::kInvalidArgument, "eigvecs_paired needs an antisymmetric matrix");
  }
  // iX is Hermitian; iX v = nu v  <=>  X v = -i nu v.
  const ComplexMatrix h = kI * x.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalBackend, "Hermitian eigensolver failed");
  }
  const Index n = x.rows();
  const double radius = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
  std::vector<PairedEigen> pairs;
  pairs.reserve(static_cast<std::size_t>(n / 2));
  for (Index i = 0; i < n / 2; ++i) {
    const double mu = -es.eigenvalues()(i);
    if (!(mu > 1e-12 * radius)) {
      throw Error(ErrorCode::kSingular, "zero eigenvalue in antisymmetric matrix");
    }
    ComplexVector v = es.eigenvectors().col(i).normalized();
    Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::conj(v(big)) / std::abs(v(big));
    v(big) = Complex(v(big).real(), 0.0);
    pairs.push_back({mu, std::move(v)});
  }
  return pairs;
}

/// Unique symmetric positive-definite square root.
inline RealMatrix sqrt_sym_pd(const RealMatrix& v) {
  if (v.rows() != v.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "sqrt_sym_pd of non-square matrix");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(v);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalBackend, "symmetric eigensolver failed");
  }
  const RealVector& w = es.eigenvalues();
  if (w.size() > 0 && !(w(0) > 0.0)) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "matrix is not positive definite (min eigenvalue " + format_real(w(0)) + ")");
  }
  RealMatrix root = es.eigenvectors() * w.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (root + root.transpose());
}

}  // namespace symdet
