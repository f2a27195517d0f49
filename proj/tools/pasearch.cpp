// Copyright 2026 The pasearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: spectrum tables, single protocol runs, parameter
// sweeps to CSV, gamma optimization and the self-check suite.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pasearch/pasearch.hpp"

namespace {

using json = nlohmann::json;
using namespace pasearch;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInadmissibleWindow = 2,
  kOverCap = 3,
  kUnwritableOutput = 4,
};

json finite_or_null(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

struct SharedFlags {
  std::uint64_t n = 0;
  std::uint64_t m = 1;
  double gamma = 0.5;
  double eps = 0.05;
  std::string kind = "constant";
  std::string steps = "auto";
  double overhead = 0.0;
  double tolerance = 1e-8;
  std::uint64_t n_cap = std::uint64_t{1} << 20;
};

ScheduleKind parse_kind(const std::string& token) {
  if (const auto kind = parse_schedule_kind(token)) return *kind;
  throw DomainError("--kind must be 'constant' or 'optimal' (got '" + token + "')");
}

ProtocolOptions protocol_options(const SharedFlags& flags) {
  ProtocolOptions options;
  options.per_shot_overhead = flags.overhead;
  options.evolution.tolerance = flags.tolerance;
  if (flags.steps != "auto") {
    try {
      options.steps = std::stoull(flags.steps);
    } catch (const std::exception&) {
      throw DomainError("--steps must be 'auto' or a positive integer (got '" + flags.steps + "')");
    }
    if (options.steps == 0) throw DomainError("--steps must be positive");
  }
  return options;
}

int cmd_spectrum(const SharedFlags& flags, const std::vector<double>& mus,
                 const std::vector<double>& grid) {
  const SearchInstance instance(flags.n, flags.m);
  std::vector<double> points = mus;
  if (points.empty()) {
    GammaGrid g{grid.at(0), grid.at(1), static_cast<std::size_t>(grid.at(2))};
    points = g.values();
  }
  std::cout << "mu,gap,gap_closed_form,e_ground,e_excited,ground_alpha,ground_beta\n";
  for (const double mu : points) {
    const Spectrum2 s = spectrum(build_hamiltonian(instance, mu));
    std::cout << format_double(mu) << ',' << format_double(s.gap) << ','
              << format_double(gap_closed_form(instance, mu)) << ',' << format_double(s.e_ground)
              << ',' << format_double(s.e_excited) << ',' << format_double(s.ground.alpha.real())
              << ',' << format_double(s.ground.beta.real()) << '\n';
  }
  return kOk;
}

int cmd_run(const SharedFlags& flags, bool full) {
  const SearchInstance instance(flags.n, flags.m);
  const auto params = ScheduleParams::make(instance, flags.gamma, flags.eps, parse_kind(flags.kind));
  if (full && flags.n > flags.n_cap) {
    throw CapacityExceeded("N = " + std::to_string(flags.n) + " exceeds --n-cap " +
                           std::to_string(flags.n_cap));
  }
  ProtocolOptions options = protocol_options(flags);
  const ProtocolRun run = simulate_protocol(instance, params, options);
  const ProtocolResult& r = run.result;
  json out = {
      {"p_success", r.p_success},
      {"p_bound", r.p_bound},
      {"p_flawed", r.p_flawed},
      {"ground_fidelity_final", r.ground_fidelity_final},
      {"shot_time", r.shot_time},
      {"expected_runtime", finite_or_null(r.expected_runtime)},
  };
  if (full) {
    FullOptions full_options;
    full_options.max_dimension = flags.n_cap;
    full_options.evolution = options.evolution;
    const Schedule schedule = build_schedule(instance, params, kProtocolScheduleResolution);
    const FullInstance full_instance = FullInstance::leading(instance);
    const FullEvolution evolution =
        options.steps == 0 ? evolve_full_converged(full_instance, schedule, full_options)
                           : evolve_full(full_instance, schedule, options.steps, full_options);
    out["p_full"] = evolution.p_success;
    out["full_discrepancy"] = std::abs(evolution.p_success - r.p_success);
    out["full_leakage"] = evolution.reduced_projection_error;
  }
  if (!run.converged) std::cerr << "warning: step doubling did not reach the tolerance\n";
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_sweep(SweepSpec spec, const SharedFlags& flags, const std::vector<double>& grid) {
  spec.epsilon = flags.eps;
  spec.kind = parse_kind(flags.kind);
  spec.protocol = protocol_options(flags);
  if (spec.gamma_values.empty()) {
    if (grid.size() != 3) throw DomainError("sweep needs --gamma values or --gamma-grid");
    spec.gamma_grid = {grid[0], grid[1], static_cast<std::size_t>(grid[2])};
  }
  if (spec.n_values.empty() || spec.m_values.empty() || spec.gammas().empty()) {
    throw DomainError("sweep grids must be nonempty");
  }

  std::ofstream csv(spec.output_path, std::ios::binary | std::ios::trunc);
  const std::string skip_path = spec.output_path + ".skipped.txt";
  std::ofstream skip(skip_path, std::ios::binary | std::ios::trunc);
  if (!csv || !skip) {
    std::cerr << "error: cannot write " << spec.output_path << '\n';
    return kUnwritableOutput;
  }
  const SweepOutcome outcome = run_sweep(spec);
  write_csv(csv, outcome.rows);
  for (const std::string& line : outcome.skipped) skip << line << '\n';
  csv.flush();
  skip.flush();
  if (!csv || !skip) {
    std::cerr << "error: failed writing " << spec.output_path << '\n';
    return kUnwritableOutput;
  }
  std::cerr << outcome.rows.size() << " rows written, " << outcome.skipped.size()
            << " points skipped (" << skip_path << ")\n";
  return kOk;
}

int cmd_optimize(const SharedFlags& flags, const std::string& model_token, GammaSearch search) {
  const SearchInstance instance(flags.n, flags.m);
  const auto model = parse_probability_model(model_token);
  if (!model) throw DomainError("--model must be 'asymptotic' or 'bound'");
  search.per_shot_overhead = flags.overhead;
  const GammaOptimum best =
      optimize_gamma(instance, flags.eps, parse_kind(flags.kind), *model, search);
  std::cout << json{{"gamma_star", best.gamma_star}, {"expected", best.expected}}.dump(2) << '\n';
  return kOk;
}

int cmd_verify(const std::string& level_token) {
  verify::Level level;
  if (level_token == "fast") {
    level = verify::Level::Fast;
  } else if (level_token == "full") {
    level = verify::Level::Full;
  } else {
    throw DomainError("--level must be 'fast' or 'full'");
  }
  int failures = 0;
  for (const verify::CheckResult& check : verify::run_all(level)) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name
              << "  residual=" << format_double(check.residual)
              << "  threshold=" << format_double(check.threshold) << "  (" << check.detail
              << ")\n";
    if (!check.passed) {
      ++failures;
      std::cerr << "failed check: " << check.name << '\n';
    }
  }
  std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
            << '\n';
  return failures == 0 ? kOk : kFailure;
}

void add_instance_flags(CLI::App* cmd, SharedFlags& flags) {
  cmd->add_option("--n", flags.n, "Number of database items N")->required();
  cmd->add_option("--m", flags.m, "Number of marked items M")->capture_default_str();
}

void add_evolution_flags(CLI::App* cmd, SharedFlags& flags) {
  cmd->add_option("--eps", flags.eps, "Adiabatic error parameter epsilon")->capture_default_str();
  cmd->add_option("--kind", flags.kind, "Schedule kind: constant|optimal")->capture_default_str();
  cmd->add_option("--steps", flags.steps, "Integrator steps, or 'auto' for step doubling")
      ->capture_default_str();
  cmd->add_option("--overhead", flags.overhead, "Constant cost added to every shot")
      ->capture_default_str();
  cmd->add_option("--tolerance", flags.tolerance, "Step-doubling amplitude tolerance")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial adiabatic quantum search laboratory"};
  app.require_subcommand(1);

  SharedFlags flags;

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Gap and ground state of H(mu) on a grid");
  add_instance_flags(spectrum_cmd, flags);
  std::vector<double> mus;
  std::vector<double> mu_grid{0.0, 1.0, 11};
  spectrum_cmd->add_option("--mu", mus, "Explicit mu values");
  spectrum_cmd->add_option("--mu-grid", mu_grid, "start stop count")->expected(3);

  auto* run_cmd = app.add_subcommand("run", "Simulate one partial adiabatic search shot");
  add_instance_flags(run_cmd, flags);
  add_evolution_flags(run_cmd, flags);
  bool full = false;
  run_cmd->add_option("--gamma", flags.gamma, "Window multiplier gamma")->capture_default_str();
  run_cmd->add_flag("--full", full, "Also run the full N-dimensional oracle");
  run_cmd->add_option("--n-cap", flags.n_cap, "Largest N for --full")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep to CSV");
  SweepSpec spec;
  std::vector<double> gamma_grid;
  add_evolution_flags(sweep_cmd, flags);
  sweep_cmd->add_option("--n", spec.n_values, "N values")->required();
  sweep_cmd->add_option("--m", spec.m_values, "M values")->required();
  sweep_cmd->add_option("--gamma", spec.gamma_values, "Explicit gamma values");
  sweep_cmd->add_option("--gamma-grid", gamma_grid, "start stop count")->expected(3);
  sweep_cmd->add_option("--out", spec.output_path, "CSV output path")->required();
  sweep_cmd->add_option("--parallel", spec.parallel, "Worker threads")->capture_default_str();

  auto* optimize_cmd = app.add_subcommand("optimize", "Minimize expected runtime over gamma");
  std::string model = "asymptotic";
  GammaSearch search;
  add_instance_flags(optimize_cmd, flags);
  optimize_cmd->add_option("--eps", flags.eps, "Adiabatic error parameter")->capture_default_str();
  optimize_cmd->add_option("--kind", flags.kind, "constant|optimal")->capture_default_str();
  optimize_cmd->add_option("--model", model, "Success model: asymptotic|bound")
      ->capture_default_str();
  optimize_cmd->add_option("--overhead", flags.overhead, "Constant cost added to every shot")
      ->capture_default_str();
  optimize_cmd->add_option("--gamma-lo", search.gamma_lo, "Lower end of the gamma bracket")
      ->capture_default_str();
  optimize_cmd->add_option("--gamma-hi", search.gamma_hi, "Upper end of the gamma bracket")
      ->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Run the self-check suite");
  std::string level = "fast";
  verify_cmd->add_option("--level", level, "fast|full")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum_cmd->parsed()) return cmd_spectrum(flags, mus, mu_grid);
    if (run_cmd->parsed()) return cmd_run(flags, full);
    if (sweep_cmd->parsed()) return cmd_sweep(spec, flags, gamma_grid);
    if (optimize_cmd->parsed()) return cmd_optimize(flags, model, search);
    if (verify_cmd->parsed()) return cmd_verify(level);
  } catch (const InadmissibleWindow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInadmissibleWindow;
  } catch (const CapacityExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOverCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
