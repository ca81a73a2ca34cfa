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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {


const auto kOrderingNames = CLI::IsMember({"xpxp", "xxpp", "interleaved", "block"});

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Williamson decomposition from submatrix determinants"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "symdet 0.1.0");

  symdet::cli::DecomposeArgs dec;
  std::string dec_ordering, dec_kbar = "per-mode";
  auto* decompose = app.add_subcommand("decompose", "Compute V = Sᵀ D S");
  decompose->add_option("input", dec.input, "Matrix file, or - for stdin")->default_val("-");
  decompose->add_option("--method", dec.method, "det or baseline")
      ->check(CLI::IsMember({"det", "baseline"}));
  auto* dec_ord = decompose->add_option("--ordering", dec_ordering, "xpxp or xxpp")
                      ->check(kOrderingNames);
  decompose->add_option("--tol", dec.tol, "Certification tolerance")->check(CLI::PositiveNumber);
  decompose->add_option("--tol-deg", dec.tol_deg, "Certification tolerance after perturbation")
      ->check(CLI::PositiveNumber);
  auto* dec_eps = decompose->add_option("--epsilon", "Perturbation magnitude for degenerate spectra")
                      ->check(CLI::PositiveNumber);
  decompose->add_flag("--allow-indefinite", dec.allow_indefinite,
                      "Accept matrices that are not positive definite");
  decompose->add_option("--kbar", dec_kbar, "Pivot policy: per-mode or fixed")
      ->check(CLI::IsMember({"per-mode", "fixed"}));
  decompose->add_option("--fixed-kbar", dec.fixed_kbar, "First k̄ tried by the fixed policy (0-based)");
  decompose->add_option("--seed", dec.seed, "Seed for the fallback perturbation");
  decompose->add_option("--threads", dec.threads, "Worker threads for the minor sweep");
  decompose->add_option("-o,--output", dec.output, "Output file, or - for stdout");

  symdet::cli::VerifyArgs ver;
  std::string ver_ordering;
  auto* verify = app.add_subcommand("verify", "Recompute residuals of a decomposition");
  verify->add_option("input", ver.input, "Matrix file")->required();
  verify->add_option("decomposition", ver.decomposition, "Decomposition file")->required();
  verify->add_option("--tol", ver.tol, "Pass threshold")->check(CLI::PositiveNumber);
  auto* ver_ord = verify->add_option("--ordering", ver_ordering, "Ordering of a raw matrix")
                      ->check(kOrderingNames);

  symdet::cli::CompareArgs cmp;
  std::string cmp_ordering;
  auto* compare = app.add_subcommand("compare", "Run both methods and compare");
  compare->add_option("input", cmp.input, "Matrix file, or - for stdin")->default_val("-");
  auto* cmp_ord = compare->add_option("--ordering", cmp_ordering, "Ordering of a raw matrix")
                      ->check(kOrderingNames);
  auto* cmp_eps = compare->add_option("--epsilon", "Perturbation magnitude for degenerate spectra")
                      ->check(CLI::PositiveNumber);
  compare->add_option("--seed", cmp.seed, "Seed for the perturbation");

  symdet::cli::GenArgs gen;
  auto* generate = app.add_subcommand("gen", "Generate a covariance matrix with known spectrum");
  auto* gen_modes = generate->add_option("--modes", "Number of modes");
  generate->add_option("--lambdas", gen.lambdas, "Comma-separated symplectic eigenvalues");
  generate->add_option("--degenerate", gen.degenerate, "Repeated eigenvalues as count:value[,count:value]");
  generate->add_option("--indefinite", gen.indefinite, "Comma-separated signs (+ or -) per mode");
  generate->add_option("--seed", gen.seed, "Random seed");
  std::string gen_ordering = "xpxp";
  generate->add_option("--ordering", gen_ordering, "xpxp or xxpp")
      ->check(kOrderingNames);
  generate->add_option("-o,--output", gen.output, "Output file, or - for stdout");

  symdet::cli::BenchArgs bench;
  auto* benchmark = app.add_subcommand("bench", "Time both methods on random instances");
  benchmark->add_option("--modes", bench.modes, "Comma-separated mode counts");
  benchmark->add_option("--trials", bench.trials, "Trials per mode count")->check(CLI::PositiveNumber);
  benchmark->add_option("--seed", bench.seed, "Random seed");
  benchmark->add_option("--csv", bench.csv, "Write CSV here (- replaces the table on stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    symdet::cli::report_error(std::cerr, symdet::ErrorCode::kInvalidArgument, e.what());
    return symdet::cli::kExitError;
  }

  if (*decompose) {
    if (*dec_ord) dec.ordering = symdet::parse_ordering(dec_ordering);
    dec.kbar = dec_kbar == "fixed" ? symdet::KbarPolicy::kFixed : symdet::KbarPolicy::kPerMode;
    if (*dec_eps) dec.epsilon = dec_eps->as<double>();
    return symdet::cli::cmd_decompose(dec, std::cerr);
  }
  if (*verify) {
    if (*ver_ord) ver.ordering = symdet::parse_ordering(ver_ordering);
    return symdet::cli::cmd_verify(ver, std::cout, std::cerr);
  }
  if (*compare) {
    if (*cmp_ord) cmp.ordering = symdet::parse_ordering(cmp_ordering);
    if (*cmp_eps) cmp.epsilon = cmp_eps->as<double>();
    return symdet::cli::cmd_compare(cmp, std::cout, std::cerr);
  }
  if (*generate) {
    gen.ordering = symdet::parse_ordering(gen_ordering);
    if (*gen_modes) gen.modes = gen_modes->as<symdet::Index>();
    return symdet::cli::cmd_gen(gen, std::cerr);
  }
  return symdet::cli::cmd_bench(bench, std::cout, std::cerr);
}
