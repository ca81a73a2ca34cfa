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

// File formats: a JSON matrix file, a raw whitespace matrix, and a JSON
// decomposition file. Path "-" means the standard streams.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symdet/error.hpp"
#include "symdet/matcore.hpp"
#include "symdet/sympbase.hpp"

namespace symdet::io {

using Json = nlohmann::json;

inline constexpr std::string_view kMatrixFormat = "symdet-matrix";
inline constexpr std::string_view kDecompFormat = "symdet-decomposition";
inline constexpr int kFormatVersion = 1;

struct MatrixMetadata {
  std::optional<std::string> label;
  std::optional<std::uint64_t> seed;
  std::vector<double> lambdas;  // ground truth, signed; empty when unknown

  bool operator==(const MatrixMetadata&) const = default;
};

struct MatrixFile {
  Index modes = 0;
  Ordering ordering = Ordering::kInterleaved;
  RealMatrix data;
  MatrixMetadata metadata;

  CovMatrix cov() const { return CovMatrix(data, ordering); }

  bool operator==(const MatrixFile& o) const {
    return modes == o.modes && ordering == o.ordering && data.rows() == o.data.rows() &&
           data.cols() == o.data.cols() && data == o.data && metadata == o.metadata;
  }
};

struct DecompFile {
  Index modes = 0;
  Ordering ordering = Ordering::kInterleaved;
  Method method = Method::kDet;
  std::optional<RealMatrix> S;   // absent for a not-diagonalizable verdict
  std::vector<double> lambdas;
  Residuals residuals;
  bool certified = true;
  std::string reason;
  Json options = Json::object();

  bool operator==(const DecompFile& o) const {
    const bool same_s = S.has_value() == o.S.has_value() &&
                        (!S || (S->rows() == o.S->rows() && S->cols() == o.S->cols() && *S == *o.S));
    return modes == o.modes && ordering == o.ordering && method == o.method && same_s &&
           lambdas == o.lambdas && residuals.symp == o.residuals.symp &&
           residuals.rec == o.residuals.rec && certified == o.certified && reason == o.reason &&
           options == o.options;
  }
};

inline DecompFile to_file(const WilliamsonDecomp& w, Json options = Json::object()) {
  DecompFile f;
  f.modes = w.modes();
  f.ordering = w.ordering;
  f.method = w.method;
  f.S = w.S;
  f.lambdas = w.lambdas;
  f.residuals = {w.residual_symp, w.residual_rec};
  f.options = std::move(options);
  return f;
}

namespace detail {

inline Json matrix_rows(const RealMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Accepts an array of rows or a flat row-major array.
inline RealMatrix parse_square(const Json& j, Index n, std::string_view what) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, std::string(what) + " must be an array");
  RealMatrix m(n, n);
  if (!j.empty() && j.front().is_array()) {
    if (static_cast<Index>(j.size()) != n) {
      throw Error(ErrorCode::kParse, std::string(what) + " must have " + std::to_string(n) + " rows");
    }
    for (Index i = 0; i < n; ++i) {
      const Json& row = j[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != n) {
        throw Error(ErrorCode::kParse, std::string(what) + " row " + std::to_string(i) +
                                           " must have " + std::to_string(n) + " entries");
      }
      for (Index k = 0; k < n; ++k) {
        const Json& x = row[static_cast<std::size_t>(k)];
        if (!x.is_number()) throw Error(ErrorCode::kParse, std::string(what) + " has a non-number");
        m(i, k) = x.get<double>();
      }
    }
    return m;
  }
  if (static_cast<Index>(j.size()) != n * n) {
    throw Error(ErrorCode::kParse, std::string(what) + " must have " + std::to_string(n * n) + " entries");
  }
  for (Index i = 0; i < n * n; ++i) {
    const Json& x = j[static_cast<std::size_t>(i)];
    if (!x.is_number()) throw Error(ErrorCode::kParse, std::string(what) + " has a non-number");
    m(i / n, i % n) = x.get<double>();
  }
  return m;
}

inline void check_format(const Json& j, std::string_view expected) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "top-level value must be an object");
  if (!j.contains("format") || j["format"] != expected) {
    throw Error(ErrorCode::kParse, "expected format \"" + std::string(expected) + "\"");
  }
  if (j.contains("version") && j["version"] != kFormatVersion) {
    throw Error(ErrorCode::kParse, "unsupported format version");
  }
}

template <class T>
T required(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "' has the wrong type");
  }
}

inline std::vector<double> number_list(const Json& j, const char* key) {
  std::vector<double> out;
  const Json& a = j.at(key);
  if (!a.is_array()) throw Error(ErrorCode::kParse, std::string("field '") + key + "' must be an array");
  for (const Json& x : a) {
    if (!x.is_number()) throw Error(ErrorCode::kParse, std::string("field '") + key + "' has a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

inline void check_symmetric(const RealMatrix& m) {
  const double asym = max_abs(RealMatrix(m - m.transpose()));
  if (asym > 1e-12 * std::max(1.0, max_abs(m))) {
    throw Error(ErrorCode::kParse, "matrix is not symmetric (max asymmetry " + format_real(asym) + ")");
  }
}

}  // namespace detail

inline Json to_json(const MatrixFile& f) {
  Json j;
  j["format"] = kMatrixFormat;
  j["version"] = kFormatVersion;
  j["modes"] = f.modes;
  j["ordering"] = to_string(f.ordering);
  j["data"] = detail::matrix_rows(f.data);
  Json meta = Json::object();
  if (f.metadata.label) meta["label"] = *f.metadata.label;
  if (f.metadata.seed) meta["seed"] = *f.metadata.seed;
  if (!f.metadata.lambdas.empty()) meta["lambdas"] = f.metadata.lambdas;
  j["metadata"] = std::move(meta);
  return j;
}

inline MatrixFile matrix_from_json(const Json& j) {
  detail::check_format(j, kMatrixFormat);
  MatrixFile f;
  f.modes = detail::required<Index>(j, "modes");
  if (f.modes < 1) throw Error(ErrorCode::kParse, "modes must be >= 1");
  f.ordering = parse_ordering(detail::required<std::string>(j, "ordering"));
  if (!j.contains("data")) throw Error(ErrorCode::kParse, "missing field 'data'");
  f.data = detail::parse_square(j["data"], 2 * f.modes, "data");
  detail::check_symmetric(f.data);
  if (j.contains("metadata")) {
    const Json& meta = j["metadata"];
    if (!meta.is_object()) throw Error(ErrorCode::kParse, "metadata must be an object");
    if (meta.contains("label")) f.metadata.label = detail::required<std::string>(meta, "label");
    if (meta.contains("seed")) f.metadata.seed = detail::required<std::uint64_t>(meta, "seed");
    if (meta.contains("lambdas")) f.metadata.lambdas = detail::number_list(meta, "lambdas");
  }
  return f;
}

/// Whitespace-separated entries of a (2d)² matrix, row-major.
inline MatrixFile matrix_from_raw(const std::string& text, Ordering ordering) {
  std::istringstream in(text);
  std::vector<double> vals;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error(ErrorCode::kParse, "raw matrix has a non-number '" + tok + "'");
    vals.push_back(x);
  }
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(vals.size()))));
  if (n == 0 || n * n != static_cast<Index>(vals.size()) || n % 2 != 0) {
    throw Error(ErrorCode::kParse, "raw matrix must hold (2d)² numbers, got " + std::to_string(vals.size()));
  }
  MatrixFile f;
  f.modes = n / 2;
  f.ordering = ordering;
  f.data = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      vals.data(), n, n);
  detail::check_symmetric(f.data);
  return f;
}

inline Json to_json(const DecompFile& f) {
  Json j;
  j["format"] = kDecompFormat;
  j["version"] = kFormatVersion;
  j["modes"] = f.modes;
  j["ordering"] = to_string(f.ordering);
  j["method"] = to_string(f.method);
  j["verdict"] = f.certified ? "certified" : "not-diagonalizable";
  j["S"] = f.S ? detail::matrix_rows(*f.S) : Json(nullptr);
  j["lambdas"] = f.lambdas;
  j["residuals"] = {{"symp", f.residuals.symp}, {"rec", f.residuals.rec}};
  if (!f.reason.empty()) j["reason"] = f.reason;
  j["options"] = f.options;
  return j;
}

inline DecompFile decomp_from_json(const Json& j) {
  detail::check_format(j, kDecompFormat);
  DecompFile f;
  f.modes = detail::required<Index>(j, "modes");
  if (f.modes < 1) throw Error(ErrorCode::kParse, "modes must be >= 1");
  f.ordering = parse_ordering(detail::required<std::string>(j, "ordering"));
  f.method = parse_method(detail::required<std::string>(j, "method"));
  const auto verdict = detail::required<std::string>(j, "verdict");
  if (verdict != "certified" && verdict != "not-diagonalizable") {
    throw Error(ErrorCode::kParse, "unknown verdict '" + verdict + "'");
  }
  f.certified = verdict == "certified";
  if (j.contains("S") && !j["S"].is_null()) f.S = detail::parse_square(j["S"], 2 * f.modes, "S");
  if (f.certified && !f.S) throw Error(ErrorCode::kParse, "certified decomposition without S");
  if (!j.contains("lambdas")) throw Error(ErrorCode::kParse, "missing field 'lambdas'");
  f.lambdas = detail::number_list(j, "lambdas");
  if (static_cast<Index>(f.lambdas.size()) != f.modes) {
    throw Error(ErrorCode::kParse, "lambdas must have one entry per mode");
  }
  if (j.contains("residuals")) {
    f.residuals.symp = detail::required<double>(j["residuals"], "symp");
    f.residuals.rec = detail::required<double>(j["residuals"], "rec");
  }
  if (j.contains("reason")) f.reason = detail::required<std::string>(j, "reason");
  if (j.contains("options")) f.options = j["options"];
  return f;
}

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

/// JSON unless the first non-blank character is something other than '{',
/// in which case the text is read as a raw matrix in `raw_ordering`.
inline MatrixFile parse_matrix(const std::string& text, Ordering raw_ordering = Ordering::kInterleaved) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] != '{') return matrix_from_raw(text, raw_ordering);
  return matrix_from_json(parse_json(text));
}

inline MatrixFile read_matrix(const std::string& path, Ordering raw_ordering = Ordering::kInterleaved) {
  return parse_matrix(read_text(path), raw_ordering);
}

inline DecompFile read_decomp(const std::string& path) {
  return decomp_from_json(parse_json(read_text(path)));
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_matrix(const std::string& path, const MatrixFile& f) { write_text(path, dump(to_json(f))); }
inline void write_decomp(const std::string& path, const DecompFile& f) { write_text(path, dump(to_json(f))); }

}  // namespace symdet::io
