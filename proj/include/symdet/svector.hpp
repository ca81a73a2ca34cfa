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

// s-vectors: the complex 2d-vector s_m packs the two rows of S belonging to
// mode m. The map is linear and depends on the quadrature ordering.

#include <span>
#include <string>
#include <vector>

#include "symdet/error.hpp"
#include "symdet/matcore.hpp"
#include "symdet/sympbase.hpp"

namespace symdet {

struct SVector {
  Index mode = 0;
  Index kbar = kNone;  // column whose entry was fixed real positive, if any
  ComplexVector entries;
};

/// Rebuilds S from one s-vector per mode. Only sign flips and Re/Im selection,
/// so extract_S(s_vectors_from_S(S)) reproduces S bit-for-bit.
inline RealMatrix extract_S(std::span<const SVector> svecs, Ordering o) {
  const Index d = static_cast<Index>(svecs.size());
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "extract_S needs at least one s-vector");
  RealMatrix s = RealMatrix::Zero(2 * d, 2 * d);
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (const SVector& sv : svecs) {
    if (sv.mode < 0 || sv.mode >= d || seen[static_cast<std::size_t>(sv.mode)]) {
      throw Error(ErrorCode::kInvalidArgument, "extract_S needs exactly one s-vector per mode");
    }
    if (sv.entries.size() != 2 * d) {
      throw Error(ErrorCode::kDimensionMismatch, "s-vector length must be 2d");
    }
    seen[static_cast<std::size_t>(sv.mode)] = true;
    const auto [r0, r1] = mode_rows(sv.mode, d, o);
    const ComplexVector& e = sv.entries;
    for (Index n = 0; n < d; ++n) {
      if (o == Ordering::kInterleaved) {
        s(r0, 2 * n + 1) = -e(2 * n).real();
        s(r1, 2 * n + 1) = e(2 * n).imag();
        s(r0, 2 * n) = e(2 * n + 1).real();
        s(r1, 2 * n) = -e(2 * n + 1).imag();
      } else {
        s(r0, n + d) = -e(n).real();
        s(r1, n + d) = e(n).imag();
        s(r0, n) = e(n + d).real();
        s(r1, n) = -e(n + d).imag();
      }
    }
  }
  return s;
}

/// Inverse of extract_S.
inline std::vector<SVector> s_vectors_from_S(const RealMatrix& s, Ordering o) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "s_vectors_from_S needs a 2d x 2d matrix");
  }
  const Index d = s.rows() / 2;
  std::vector<SVector> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Index m = 0; m < d; ++m) {
    const auto [r0, r1] = mode_rows(m, d, o);
    ComplexVector e(2 * d);
    for (Index n = 0; n < d; ++n) {
      if (o == Ordering::kInterleaved) {
        e(2 * n) = Complex(-s(r0, 2 * n + 1), s(r1, 2 * n + 1));
        e(2 * n + 1) = Complex(s(r0, 2 * n), -s(r1, 2 * n));
      } else {
        e(n) = Complex(-s(r0, n + d), s(r1, n + d));
        e(n + d) = Complex(s(r0, n), -s(r1, n));
      }
    }
    out.push_back({m, kNone, std::move(e)});
  }
  return out;
}

/// s*_{m,k} s_{m,l}: invariant under the per-mode phase gauge.
inline Complex phase_product(const SVector& sv, Index k, Index l) {
  return std::conj(sv.entries(k)) * sv.entries(l);
}

}  // namespace symdet
