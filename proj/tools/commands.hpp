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

// Subcommand implementations for the symdet tool. Each returns the process
// exit code: 0 success, 1 error, 2 not-diagonalizable verdict.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symdet/io.hpp"
#include "symdet/symdet.hpp"

namespace symdet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotDiagonalizable = 2;

inline void report_error(std::ostream& err, ErrorCode code, const std::string& what) {
  err << "error: " << error_token(code) << ' ' << what << '\n';
}

/// Runs fn, turning library errors into exit code 1 and a one-line reason.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
  } catch (const std::exception& e) {
    report_error(err, ErrorCode::kNumericalBackend, e.what());
  }
  return kExitError;
}

namespace detail {

inline bool positive_definite(const CovMatrix& v) {
  Eigen::LLT<RealMatrix> llt(v.matrix());
  return llt.info() == Eigen::Success;
}

template <class Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorCode::kInvalidArgument, "not a number: '" + s + "'");
  return x;
}

inline long parse_int(const std::string& s) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorCode::kInvalidArgument, "not an integer: '" + s + "'");
  return x;
}

}  // namespace detail

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
  std::string input = "-";
  std::string output = "-";
  std::string method = "det";
  std::optional<Ordering> ordering;  // raw-input ordering, or output ordering for JSON input
  double tol = 1e-8;
  double tol_deg = 1e-6;
  std::optional<double> epsilon;
  bool allow_indefinite = false;
  KbarPolicy kbar = KbarPolicy::kPerMode;
  Index fixed_kbar = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

inline io::Json options_echo(const DecomposeArgs& a) {
  io::Json o;
  o["kbar"] = a.kbar == KbarPolicy::kPerMode ? "per-mode" : "fixed";
  if (a.kbar == KbarPolicy::kFixed) o["fixed_kbar"] = a.fixed_kbar;
  o["tol"] = a.tol;
  o["seed"] = a.seed;
  o["epsilon"] = 0.0;
  return o;
}

inline CovMatrix load_input(const std::string& path, std::optional<Ordering> ordering) {
  const std::string text = io::read_text(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool raw = first != std::string::npos && text[first] != '{';
  const io::MatrixFile f = io::parse_matrix(text, ordering.value_or(Ordering::kInterleaved));
  CovMatrix v = f.cov();
  if (!raw && ordering) v = v.to(*ordering);
  return v;
}

inline int cmd_decompose(const DecomposeArgs& a, std::ostream& err) {
  return guarded(err, [&] {
    const CovMatrix v = load_input(a.input, a.ordering);
    io::Json opts = options_echo(a);
    const Method method = parse_method(a.method);

    if (method == Method::kBaseline) {
      if (!detail::positive_definite(v)) {
        throw Error(ErrorCode::kNotPositiveDefinite, "the baseline method needs a positive-definite matrix");
      }
      io::write_decomp(a.output, io::to_file(decompose_baseline(v, a.tol), opts));
      return kExitOk;
    }
    if (method != Method::kDet) {
      throw Error(ErrorCode::kInvalidArgument, "--method must be det or baseline");
    }

    DetOptions det;
    det.tol = a.tol;
    det.kbar_policy = a.kbar;
    det.fixed_kbar = a.fixed_kbar;
    det.threads = a.threads;

    if (!detail::positive_definite(v)) {
      if (!a.allow_indefinite) {
        throw Error(ErrorCode::kNotPositiveDefinite,
                    "matrix is not positive definite; pass --allow-indefinite to attempt a signed decomposition");
      }
      IndefiniteOptions io_opts;
      io_opts.tol = a.tol;
      io_opts.kbar_policy = a.kbar;
      io_opts.fixed_kbar = a.fixed_kbar;
      const IndefiniteResult r = decompose_indefinite(v, io_opts);
      io::Json gimel = io::Json::array();
      for (const Complex& g : r.spectrum.gimel) gimel.push_back({g.real(), g.imag()});
      opts["gimel"] = gimel;
      if (r.diagonalizable) {
        io::write_decomp(a.output, io::to_file(*r.decomp, opts));
        return kExitOk;
      }
      io::DecompFile f;
      f.modes = v.modes();
      f.ordering = v.ordering();
      f.method = Method::kDetIndefinite;
      f.certified = false;
      f.reason = r.reason;
      f.residuals = r.residuals;
      for (const Complex& l : r.spectrum.lambdas_plus) f.lambdas.push_back(l.real());
      f.options = opts;
      io::write_decomp(a.output, f);
      err << "verdict: not-diagonalizable " << r.reason << '\n';
      return kExitNotDiagonalizable;
    }

    const SympSpectrum spec = symplectic_eigenvalues(v, det.tau_deg);
    if (!spec.degenerate()) {
      WilliamsonDecomp w = decompose_det(v, det);
      io::Json kb = io::Json::array();
      for (Index k : w.kbars) kb.push_back(k);
      opts["kbars"] = kb;
      io::write_decomp(a.output, io::to_file(w, opts));
      return kExitOk;
    }
    DegenerateOptions dopt{det, a.tol_deg};
    const PerturbPlan plan = make_plan(v, a.seed, a.epsilon);
    const WilliamsonDecomp w = decompose_perturbed(v, plan, dopt);
    opts["epsilon"] = w.epsilon;
    opts["tol_deg"] = a.tol_deg;
    opts["perturbation"] = to_string(plan.strategy);
    io::write_decomp(a.output, io::to_file(w, opts));
    return kExitOk;
  });
}

// ------------------------------------------------------------------- verify

struct VerifyArgs {
  std::string input;
  std::string decomposition;
  double tol = 1e-8;
  std::optional<Ordering> ordering;
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const CovMatrix v0 = load_input(a.input, a.ordering);
    const io::DecompFile f = io::read_decomp(a.decomposition);
    if (f.modes != v0.modes()) {
      throw Error(ErrorCode::kDimensionMismatch, "matrix has " + std::to_string(v0.modes()) +
                                                     " modes but the decomposition has " +
                                                     std::to_string(f.modes));
    }
    if (!f.S) {
      out << "verdict: not-diagonalizable (no S to verify)\n";
      report_error(err, ErrorCode::kCertificationFailed, "decomposition carries no symplectic matrix");
      return kExitError;
    }
    const CovMatrix v = v0.to(f.ordering);
    const Residuals r = certify(v.matrix(), *f.S, f.lambdas, f.ordering);
    const bool ok = r.symp <= a.tol && r.rec <= a.tol;
    out << std::setprecision(3) << std::scientific;
    out << "residual_symp " << r.symp << '\n';
    out << "residual_rec  " << r.rec << '\n';
    out << "tol           " << a.tol << '\n';
    out << (ok ? "PASS" : "FAIL") << '\n';
    if (!ok) {
      report_error(err, ErrorCode::kCertificationFailed,
                   "residuals exceed tolerance (symp " + format_real(r.symp) + ", rec " + format_real(r.rec) + ")");
      return kExitError;
    }
    return kExitOk;
  });
}

// ------------------------------------------------------------------ compare

struct CompareReport {
  bool perturbed = false;
  double epsilon = 0.0;
  double lambda_rel_diff = 0.0;
  double gauge_distance = 0.0;
  double det_ms = 0.0;
  double baseline_ms = 0.0;
  Residuals det_residuals;
  Residuals baseline_residuals;
};

inline CompareReport compare_methods(const CovMatrix& v0, std::uint64_t seed = 0,
                                     std::optional<double> epsilon = std::nullopt) {
  if (!detail::positive_definite(v0)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "compare needs a positive-definite matrix");
  }
  CompareReport rep;
  CovMatrix v = v0.to(Ordering::kInterleaved);
  if (symplectic_eigenvalues(v).degenerate()) {
    const PerturbPlan plan = make_plan(v, seed, epsilon);
    rep.perturbed = true;
    rep.epsilon = plan.epsilons[0];
    v = CovMatrix(RealMatrix(v.matrix() + rep.epsilon * plan.delta), v.ordering());
  }
  WilliamsonDecomp det, base;
  rep.det_ms = detail::time_ms([&] { det = decompose_det(v); });
  rep.baseline_ms = detail::time_ms([&] { base = decompose_baseline(v); });
  for (std::size_t m = 0; m < det.lambdas.size(); ++m) {
    rep.lambda_rel_diff = std::max(rep.lambda_rel_diff,
                                   std::abs(det.lambdas[m] - base.lambdas[m]) / std::abs(base.lambdas[m]));
  }
  rep.gauge_distance = gauge_distance(det.S, det.lambdas, base.S, base.lambdas, v.ordering());
  rep.det_residuals = {det.residual_symp, det.residual_rec};
  rep.baseline_residuals = {base.residual_symp, base.residual_rec};
  return rep;
}

struct CompareArgs {
  std::string input = "-";
  std::optional<Ordering> ordering;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
};

inline int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const CompareReport r = compare_methods(load_input(a.input, a.ordering), a.seed, a.epsilon);
    out << std::setprecision(3) << std::scientific;
    if (r.perturbed) {
      out << "note: degenerate spectrum; both methods ran on V + eps*Delta with eps " << r.epsilon << '\n';
    }
    out << "lambda_max_rel_diff  " << r.lambda_rel_diff << '\n';
    out << "gauge_distance       " << r.gauge_distance << '\n';
    out << "det_residuals        " << r.det_residuals.symp << ' ' << r.det_residuals.rec << '\n';
    out << "baseline_residuals   " << r.baseline_residuals.symp << ' ' << r.baseline_residuals.rec << '\n';
    out << std::fixed << std::setprecision(4);
    out << "det_ms               " << r.det_ms << '\n';
    out << "baseline_ms          " << r.baseline_ms << '\n';
    return kExitOk;
  });
}

// ---------------------------------------------------------------------- gen

struct GenArgs {
  std::optional<Index> modes;
  std::string lambdas;      // comma list
  std::string degenerate;   // comma list of count:value
  std::string indefinite;   // comma list of + / -
  std::uint64_t seed = 0;
  Ordering ordering = Ordering::kInterleaved;
  std::string output = "-";
};

/// Distinct λ uniform in [1, 5], pairwise relative gap at least 1e-2.
inline std::vector<double> random_lambdas(std::size_t count, std::uint64_t seed,
                                          std::vector<double> avoid = {}) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(1.0, 5.0);
  std::vector<double> out;
  while (out.size() < count) {
    const double x = unif(rng);
    const auto close = [&](double y) { return std::abs(x - y) < 1e-2 * std::max(std::abs(x), std::abs(y)); };
    if (std::any_of(out.begin(), out.end(), close) || std::any_of(avoid.begin(), avoid.end(), close)) continue;
    out.push_back(x);
  }
  return out;
}

inline io::MatrixFile generate(const GenArgs& a) {
  std::vector<double> lam;
  for (const std::string& s : detail::split(a.lambdas, ',')) lam.push_back(detail::parse_double(s));
  for (const std::string& group : detail::split(a.degenerate, ',')) {
    const auto parts = detail::split(group, ':');
    if (parts.size() != 2) throw Error(ErrorCode::kInvalidArgument, "--degenerate expects count:value");
    const long count = detail::parse_int(parts[0]);
    if (count < 1) throw Error(ErrorCode::kInvalidArgument, "--degenerate count must be >= 1");
    lam.insert(lam.end(), static_cast<std::size_t>(count), detail::parse_double(parts[1]));
  }
  if (a.modes) {
    if (*a.modes < 1) throw Error(ErrorCode::kInvalidArgument, "--modes must be >= 1");
    const auto d = static_cast<std::size_t>(*a.modes);
    if (lam.size() > d) throw Error(ErrorCode::kInvalidArgument, "more λ values than --modes");
    const auto extra = random_lambdas(d - lam.size(), a.seed, lam);
    lam.insert(lam.end(), extra.begin(), extra.end());
  }
  if (lam.empty()) throw Error(ErrorCode::kInvalidArgument, "give --modes, --lambdas or --degenerate");
  for (double l : lam) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw Error(ErrorCode::kInvalidArgument, "λ values must be positive; use --indefinite for signs");
    }
  }
  const auto signs = detail::split(a.indefinite, ',');
  if (!signs.empty()) {
    if (signs.size() != lam.size()) throw Error(ErrorCode::kInvalidArgument, "--indefinite needs one sign per mode");
    for (std::size_t m = 0; m < lam.size(); ++m) {
      if (signs[m] == "-" || signs[m] == "−") {
        lam[m] = -lam[m];
      } else if (signs[m] != "+") {
        throw Error(ErrorCode::kInvalidArgument, "--indefinite signs must be + or -");
      }
    }
  }
  const GeneratedCovariance g = random_covariance(lam, a.seed, a.ordering);
  io::MatrixFile f;
  f.modes = g.cov.modes();
  f.ordering = a.ordering;
  f.data = g.cov.matrix();
  f.metadata.label = "generated";
  f.metadata.seed = a.seed;
  f.metadata.lambdas = lam;
  return f;
}

inline int cmd_gen(const GenArgs& a, std::ostream& err) {
  return guarded(err, [&] {
    io::write_matrix(a.output, generate(a));
    return kExitOk;
  });
}

// -------------------------------------------------------------------- bench

struct BenchRow {
  Index modes = 0;
  Method method = Method::kDet;
  double median_ms = 0.0;
  double max_residual = 0.0;
};

inline std::vector<BenchRow> run_bench(const std::vector<Index>& modes, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "--trials must be >= 1");
  std::vector<BenchRow> rows;
  for (Index d : modes) {
    if (d < 1) throw Error(ErrorCode::kInvalidArgument, "mode counts must be >= 1");
    std::vector<double> det_ms, base_ms;
    double det_res = 0.0, base_res = 0.0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t s = seed + 1000 * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(t);
      const GeneratedCovariance g = random_covariance(random_lambdas(static_cast<std::size_t>(d), s), s);
      WilliamsonDecomp w;
      det_ms.push_back(detail::time_ms([&] { w = decompose_det(g.cov); }));
      det_res = std::max({det_res, w.residual_symp, w.residual_rec});
      base_ms.push_back(detail::time_ms([&] { w = decompose_baseline(g.cov); }));
      base_res = std::max({base_res, w.residual_symp, w.residual_rec});
    }
    rows.push_back({d, Method::kDet, detail::median(det_ms), det_res});
    rows.push_back({d, Method::kBaseline, detail::median(base_ms), base_res});
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "d,method,median_ms,max_residual\n";
  for (const BenchRow& r : rows) {
    out << r.modes << ',' << to_string(r.method) << ',' << std::setprecision(6) << r.median_ms << ','
        << std::setprecision(3) << std::scientific << r.max_residual << std::defaultfloat << '\n';
  }
}

struct BenchArgs {
  std::string modes = "2,4,8";
  int trials = 5;
  std::uint64_t seed = 0;
  std::string csv;  // empty: no CSV file; "-": CSV on stdout instead of the table
};

inline int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<Index> modes;
    for (const std::string& s : detail::split(a.modes, ',')) modes.push_back(detail::parse_int(s));
    const std::vector<BenchRow> rows = run_bench(modes, a.trials, a.seed);
    if (a.csv == "-") {
      write_csv(out, rows);
      return kExitOk;
    }
    out << std::setw(4) << "d" << std::setw(10) << "method" << std::setw(14) << "median_ms"
        << std::setw(14) << "max_residual" << '\n';
    for (const BenchRow& r : rows) {
      out << std::setw(4) << r.modes << std::setw(10) << to_string(r.method) << std::setw(14)
          << std::fixed << std::setprecision(4) << r.median_ms << std::setw(14) << std::scientific
          << std::setprecision(2) << r.max_residual << std::defaultfloat << '\n';
    }
    if (!a.csv.empty()) {
      std::ostringstream csv;
      write_csv(csv, rows);
      io::write_text(a.csv, csv.str());
    }
    return kExitOk;
  });
}

}  // namespace symdet::cli
