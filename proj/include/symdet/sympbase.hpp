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

// Symplectic forms, quadrature orderings, symplectic checks, the one-mode
// phase-rotation gauge, and seeded random instances.

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symdet/error.hpp"
#include "symdet/matcore.hpp"

namespace symdet {

/// kInterleaved is (x1,p1,...,xd,pd); kBlock is (x1,...,xd,p1,...,pd).
enum class Ordering { kInterleaved, kBlock };

constexpr std::string_view to_string(Ordering o) {
  return o == Ordering::kInterleaved ? "xpxp" : "xxpp";
}

inline Ordering parse_ordering(std::string_view s) {
  if (s == "xpxp" || s == "interleaved") return Ordering::kInterleaved;
  if (s == "xxpp" || s == "block") return Ordering::kBlock;
  throw Error(ErrorCode::kParse, "unknown ordering '" + std::string(s) + "'");
}

struct SympForm {
  Index modes = 1;
  Ordering ordering = Ordering::kInterleaved;

  Index dim() const { return 2 * modes; }
};

inline RealMatrix omega(const SympForm& form) {
  if (form.modes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "symplectic form needs at least one mode");
  }
  const Index d = form.modes;
  RealMatrix om = RealMatrix::Zero(2 * d, 2 * d);
  for (Index m = 0; m < d; ++m) {
    if (form.ordering == Ordering::kInterleaved) {
      om(2 * m, 2 * m + 1) = 1.0;
      om(2 * m + 1, 2 * m) = -1.0;
    } else {
      om(m, m + d) = 1.0;
      om(m + d, m) = -1.0;
    }
  }
  return om;
}

/// Row indices (x row, p row) that belong to `mode`.
inline std::pair<Index, Index> mode_rows(Index mode, Index modes, Ordering o) {
  return o == Ordering::kInterleaved ? std::pair{2 * mode, 2 * mode + 1}
                                     : std::pair{mode, mode + modes};
}

/// perm[i] is the interleaved position of block position i.
inline std::vector<Index> block_to_interleaved(Index modes) {
  std::vector<Index> perm(static_cast<std::size_t>(2 * modes));
  for (Index m = 0; m < modes; ++m) {
    perm[static_cast<std::size_t>(m)] = 2 * m;
    perm[static_cast<std::size_t>(m + modes)] = 2 * m + 1;
  }
  return perm;
}

/// Re-expresses a 2d x 2d phase-space matrix (covariance or symplectic) in
/// another quadrature ordering. Pure permutation: no arithmetic on entries.
inline RealMatrix reorder(const RealMatrix& m, Ordering from, Ordering to) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw Error(ErrorCode::kDimensionMismatch, "reorder needs a 2d x 2d matrix");
  }
  if (from == to) return m;
  const auto perm = block_to_interleaved(m.rows() / 2);
  if (to == Ordering::kBlock) return m(perm, perm);
  RealMatrix out(m.rows(), m.cols());
  out(perm, perm) = m;
  return out;
}

/// Real symmetric 2d x 2d matrix with a declared ordering. Not required to be
/// positive definite; operations that need positivity check it themselves.
class CovMatrix {
 public:
  explicit CovMatrix(RealMatrix m, Ordering ordering = Ordering::kInterleaved,
                     double sym_tol = 1e-12)
      : ordering_(ordering) {
    if (m.rows() == 0 || m.rows() != m.cols() || m.rows() % 2 != 0) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "covariance matrix must be 2d x 2d with d >= 1, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) {
      throw Error(ErrorCode::kInvalidArgument, "covariance matrix has non-finite entries");
    }
    const double asym = max_abs(RealMatrix(m - m.transpose()));
    if (asym > sym_tol * max_abs(m)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "covariance matrix is not symmetric (max asymmetry " + format_real(asym) + ")");
    }
    m_ = 0.5 * (m + m.transpose());
  }

  Index modes() const { return m_.rows() / 2; }
  Ordering ordering() const { return ordering_; }
  SympForm form() const { return {modes(), ordering_}; }
  const RealMatrix& matrix() const { return m_; }

  CovMatrix to(Ordering target) const {
    CovMatrix out = *this;
    out.m_ = reorder(m_, ordering_, target);
    out.ordering_ = target;
    return out;
  }

 private:
  RealMatrix m_;
  Ordering ordering_;
};

inline CovMatrix convert_ordering(const CovMatrix& v, Ordering to) { return v.to(to); }

struct SymplecticCheck {
  double residual = 0.0;
  bool ok = false;
};

inline double symplectic_residual(const RealMatrix& s, const SympForm& form) {
  if (s.rows() != form.dim() || s.cols() != form.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix is " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                    " but the form has dimension " + std::to_string(form.dim()));
  }
  const RealMatrix om = omega(form);
  return max_abs(RealMatrix(s.transpose() * om * s - om));
}

inline SymplecticCheck is_symplectic(const RealMatrix& s, const SympForm& form,
                                     double tol = 1e-9) {
  const double r = symplectic_residual(s, form);
  return {r, r <= tol};
}

/// D = ⊕ λ_m I₂, laid out in the given ordering.
inline RealMatrix williamson_form(std::span<const double> lambdas, Ordering o) {
  const Index d = static_cast<Index>(lambdas.size());
  RealVector diag(2 * d);
  for (Index m = 0; m < d; ++m) {
    const auto [r0, r1] = mode_rows(m, d, o);
    diag(r0) = diag(r1) = lambdas[static_cast<std::size_t>(m)];
  }
  return diag.asDiagonal();
}

enum class Method { kDet, kBaseline, kDetPerturbed, kDetIndefinite };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::kDet: return "det";
    case Method::kBaseline: return "baseline";
    case Method::kDetPerturbed: return "det-perturbed";
    case Method::kDetIndefinite: return "det-indefinite";
  }
  return "det";
}

inline Method parse_method(std::string_view s) {
  if (s == "det") return Method::kDet;
  if (s == "baseline") return Method::kBaseline;
  if (s == "det-perturbed") return Method::kDetPerturbed;
  if (s == "det-indefinite") return Method::kDetIndefinite;
  throw Error(ErrorCode::kParse, "unknown method '" + std::string(s) + "'");
}

/// V = Sᵀ D S. Row pair of mode m in S goes with lambdas[m].
struct WilliamsonDecomp {
  RealMatrix S;
  std::vector<double> lambdas;
  Ordering ordering = Ordering::kInterleaved;
  double residual_symp = 0.0;
  double residual_rec = 0.0;
  Method method = Method::kDet;
  double epsilon = 0.0;        // perturbation magnitude, 0 when none was used
  std::vector<Index> kbars;    // pivot column per mode (det methods)

  Index modes() const { return static_cast<Index>(lambdas.size()); }
  RealMatrix diagonal() const { return williamson_form(lambdas, ordering); }
};

struct Residuals {
  double symp = 0.0;
  double rec = 0.0;
};

/// symp = ‖SᵀΩS − Ω‖_max, rec = ‖SᵀDS − V‖_max / max(1, ‖V‖_max).
inline Residuals certify(const RealMatrix& v, const RealMatrix& s,
                         std::span<const double> lambdas, Ordering o) {
  const Index d = static_cast<Index>(lambdas.size());
  if (v.rows() != 2 * d || s.rows() != 2 * d || s.cols() != 2 * d || v.cols() != 2 * d) {
    throw Error(ErrorCode::kDimensionMismatch, "certify: inconsistent dimensions");
  }
  Residuals r;
  r.symp = symplectic_residual(s, {d, o});
  const RealMatrix rec = s.transpose() * williamson_form(lambdas, o) * s - v;
  r.rec = max_abs(rec) / std::max(1.0, max_abs(v));
  return r;
}

/// One phase rotation per mode: P = ⊕ [[cos φ, sin φ], [−sin φ, cos φ]].
struct GaugeRotation {
  std::vector<double> phases;

  RealMatrix matrix(Ordering o) const {
    const Index d = static_cast<Index>(phases.size());
    RealMatrix p = RealMatrix::Zero(2 * d, 2 * d);
    for (Index m = 0; m < d; ++m) {
      const auto [r0, r1] = mode_rows(m, d, o);
      const double c = std::cos(phases[static_cast<std::size_t>(m)]);
      const double s = std::sin(phases[static_cast<std::size_t>(m)]);
      p(r0, r0) = c;
      p(r0, r1) = s;
      p(r1, r0) = -s;
      p(r1, r1) = c;
    }
    return p;
  }
};

inline RealMatrix gauge_apply(const RealMatrix& s, const GaugeRotation& p, Ordering o) {
  if (s.rows() != 2 * static_cast<Index>(p.phases.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "gauge rotation and matrix disagree on mode count");
  }
  return p.matrix(o) * s;
}

namespace detail {

// Kuhn's augmenting-path matching restricted to edges with cost <= limit.
inline bool perfect_matching(const RealMatrix& cost, double limit, std::vector<Index>& match_of_col) {
  const Index n = cost.rows();
  match_of_col.assign(static_cast<std::size_t>(n), -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, Index row) -> bool {
    for (Index col = 0; col < n; ++col) {
      if (!(cost(row, col) <= limit) || seen[static_cast<std::size_t>(col)]) continue;
      seen[static_cast<std::size_t>(col)] = 1;
      Index& owner = match_of_col[static_cast<std::size_t>(col)];
      if (owner < 0 || self(self, owner)) {
        owner = row;
        return true;
      }
    }
    return false;
  };
  for (Index row = 0; row < n; ++row) {
    seen.assign(static_cast<std::size_t>(n), 0);
    if (!augment(augment, row)) return false;
  }
  return true;
}

// Assignment minimising the largest cost; infinite entries are forbidden.
// Returns match_of_col[col] = row, or an empty vector when none exists.
inline std::vector<Index> bottleneck_assignment(const RealMatrix& cost) {
  std::vector<double> levels;
  for (Index i = 0; i < cost.size(); ++i) {
    if (std::isfinite(cost.data()[i])) levels.push_back(cost.data()[i]);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<Index> match;
  if (levels.empty() || !perfect_matching(cost, levels.back(), match)) return {};
  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (perfect_matching(cost, levels[mid], match)) hi = mid; else lo = mid + 1;
  }
  perfect_matching(cost, levels[lo], match);
  return match;
}

// Rows of mode `mode` as a 2 x 2d block.
inline RealMatrix mode_block(const RealMatrix& s, Index mode, Ordering o) {
  const auto [r0, r1] = mode_rows(mode, s.rows() / 2, o);
  RealMatrix b(2, s.cols());
  b.row(0) = s.row(r0);
  b.row(1) = s.row(r1);
  return b;
}

// Phase φ minimising ‖R(φ)·a − b‖_F (2x2 Procrustes restricted to rotations).
inline double procrustes_phase(const RealMatrix& a, const RealMatrix& b) {
  const Eigen::Matrix2d m = a * b.transpose();
  return std::atan2(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1));
}

inline Eigen::Matrix2d rotation(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return r;
}

}  // namespace detail

struct GaugeAlignment {
  double distance = 0.0;
  RealMatrix aligned;               // P·Π·S1
  std::vector<Index> permutation;   // mode m of `aligned` is mode permutation[m] of S1
  GaugeRotation rotation;           // phases applied to the permuted S1
};

/// Best alignment of S1 onto S2 by one-mode phase rotations and by mode
/// permutations that only pair modes whose λ agree within
/// equal_tol · max|λ|. Mode i of S1 carries lambdas1[i], mode j of S2
/// carries lambdas2[j].
inline GaugeAlignment gauge_align(const RealMatrix& s1, std::span<const double> lambdas1,
                                  const RealMatrix& s2, std::span<const double> lambdas2,
                                  Ordering o = Ordering::kInterleaved, double equal_tol = 1e-6) {
  const Index d = static_cast<Index>(lambdas1.size());
  if (static_cast<Index>(lambdas2.size()) != d || s1.rows() != 2 * d || s1.cols() != 2 * d ||
      s2.rows() != 2 * d || s2.cols() != 2 * d) {
    throw Error(ErrorCode::kDimensionMismatch, "gauge_align: inconsistent dimensions");
  }
  double scale = 0.0;
  for (double l : lambdas1) scale = std::max(scale, std::abs(l));
  for (double l : lambdas2) scale = std::max(scale, std::abs(l));
  const double tol = equal_tol * scale;

  // cost(i, j): residual of rotating mode i of S1 onto mode j of S2.
  RealMatrix cost = RealMatrix::Constant(d, d, std::numeric_limits<double>::infinity());
  RealMatrix phase = RealMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const RealMatrix a = detail::mode_block(s1, i, o);
    for (Index j = 0; j < d; ++j) {
      if (std::abs(lambdas1[static_cast<std::size_t>(i)] - lambdas2[static_cast<std::size_t>(j)]) > tol) continue;
      const RealMatrix b = detail::mode_block(s2, j, o);
      const double phi = detail::procrustes_phase(a, b);
      phase(i, j) = phi;
      cost(i, j) = max_abs(RealMatrix(detail::rotation(phi) * a - b));
    }
  }
  const auto match = detail::bottleneck_assignment(cost);
  if (match.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "gauge_align: symplectic eigenvalue multisets differ");
  }
  GaugeAlignment out;
  out.aligned = RealMatrix(2 * d, 2 * d);
  out.permutation.resize(static_cast<std::size_t>(d));
  out.rotation.phases.resize(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) {
    const Index i = match[static_cast<std::size_t>(j)];
    const double phi = phase(i, j);
    out.permutation[static_cast<std::size_t>(j)] = i;
    out.rotation.phases[static_cast<std::size_t>(j)] = phi;
    const RealMatrix rotated = detail::rotation(phi) * detail::mode_block(s1, i, o);
    const auto [r0, r1] = mode_rows(j, d, o);
    out.aligned.row(r0) = rotated.row(0);
    out.aligned.row(r1) = rotated.row(1);
    out.distance = std::max(out.distance, cost(i, j));
  }
  return out;
}

inline GaugeAlignment gauge_align(const RealMatrix& s1, const RealMatrix& s2,
                                  std::span<const double> lambdas,
                                  Ordering o = Ordering::kInterleaved, double equal_tol = 1e-6) {
  return gauge_align(s1, lambdas, s2, lambdas, o, equal_tol);
}

/// min over gauge rotations P and equal-λ mode permutations Π of ‖P·Π·S1 − S2‖_max.
inline double gauge_distance(const RealMatrix& s1, const RealMatrix& s2,
                             std::span<const double> lambdas,
                             Ordering o = Ordering::kInterleaved) {
  return gauge_align(s1, s2, lambdas, o).distance;
}

inline double gauge_distance(const RealMatrix& s1, std::span<const double> lambdas1,
                             const RealMatrix& s2, std::span<const double> lambdas2,
                             Ordering o = Ordering::kInterleaved) {
  return gauge_align(s1, lambdas1, s2, lambdas2, o).distance;
}

/// exp(ΩH) for real symmetric H: symplectic in exact arithmetic.
inline RealMatrix symplectic_exp(const RealMatrix& h, Ordering o = Ordering::kInterleaved) {
  const RealMatrix generator = omega({h.rows() / 2, o}) * h;
  return generator.exp();
}

/// Deterministic in `seed`. H has entries uniform in [-0.5, 0.5], rescaled so
/// that ‖ΩH‖₂ <= 2.
inline RealMatrix random_symplectic(Index modes, std::uint64_t seed,
                                    Ordering o = Ordering::kInterleaved) {
  if (modes < 1) throw Error(ErrorCode::kInvalidArgument, "random_symplectic needs d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  const Index n = 2 * modes;
  RealMatrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) h(i, j) = h(j, i) = unif(rng);
  }
  const RealMatrix om = omega({modes, Ordering::kInterleaved});
  const double norm = Eigen::JacobiSVD<RealMatrix>(om * h).singularValues()(0);
  if (norm > 2.0) h *= 2.0 / norm;
  return reorder(symplectic_exp(h), Ordering::kInterleaved, o);
}

struct GeneratedCovariance {
  CovMatrix cov;
  RealMatrix S;                 // ground-truth diagonalising symplectic
  std::vector<double> lambdas;  // ground-truth symplectic eigenvalues, per mode of S
};

/// V = Sᵀ D S with S = random_symplectic(d, seed).
inline GeneratedCovariance random_covariance(std::span<const double> lambdas, std::uint64_t seed,
                                             Ordering o = Ordering::kInterleaved) {
  const Index d = static_cast<Index>(lambdas.size());
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "random_covariance needs d >= 1");
  for (double l : lambdas) {
    if (l == 0.0 || !std::isfinite(l)) {
      throw Error(ErrorCode::kInvalidArgument, "symplectic eigenvalues must be finite and non-zero");
    }
  }
  RealMatrix s = random_symplectic(d, seed, o);
  RealMatrix v = s.transpose() * williamson_form(lambdas, o) * s;
  v = 0.5 * (v + v.transpose());
  return {CovMatrix(std::move(v), o), std::move(s), {lambdas.begin(), lambdas.end()}};
}

}  // namespace symdet
