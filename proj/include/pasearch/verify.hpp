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

#pragma once

// Self-check suite behind `pasearch verify`. Each check recomputes a quantity
// along two independent routes and reports the worst residual it saw.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pasearch/dynamics.hpp"
#include "pasearch/numerics.hpp"
#include "pasearch/schedule.hpp"
#include "pasearch/spectral.hpp"

namespace pasearch::verify {

enum class Level { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed;
  double residual;
  double threshold;
  std::string detail;
};

/// N log-uniform in [2, n_max], M log-uniform in [1, N-1].
inline SearchInstance random_instance(std::mt19937_64& rng, std::uint64_t n_max = 1'000'000) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo)));
  };
  auto n = static_cast<std::uint64_t>(std::llround(log_uniform(2.0, static_cast<double>(n_max))));
  n = std::clamp<std::uint64_t>(n, 2, n_max);
  auto m = static_cast<std::uint64_t>(std::llround(log_uniform(1.0, static_cast<double>(n - 1))));
  m = std::clamp<std::uint64_t>(m, 1, n - 1);
  return SearchInstance(n, m);
}

/// Admissible gamma drawn uniformly from (0, min(cap, 0.95 max_gamma)].
inline double random_gamma(std::mt19937_64& rng, const SearchInstance& instance,
                           double cap = 5.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double hi = std::min(cap, 0.95 * max_gamma(instance));
  return hi * (1e-3 + (1.0 - 1e-3) * unit(rng));
}

/// Quadrature of 1/rate_bound over the window, split at the kink mu = 1/2.
inline double quadrature_shot_time(const SearchInstance& instance, const ScheduleParams& params) {
  const auto inverse_rate = [&](double mu) {
    return rate_bound(instance, mu, params.epsilon()).inverse();
  };
  return numerics::integrate(inverse_rate, params.mu_minus(), 0.5, 1e-13).value +
         numerics::integrate(inverse_rate, 0.5, params.mu_plus(), 1e-13).value;
}

/// min over phi on a uniform grid (containing pi) and chi by Brent minimization.
inline double grid_minimum_interference(double a_sq, std::size_t phi_points = 721) {
  const double chi_max = std::sqrt(1.0 - a_sq);
  double best = 1.0;
  for (std::size_t i = 0; i < phi_points; ++i) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) /
                       static_cast<double>(phi_points - 1);
    const auto p = [&](double chi) {
      return interference_probability(InterferenceParams::make(a_sq, chi, phi));
    };
    best = std::min({best, p(0.0), p(chi_max)});
    if (chi_max > 0.0) {
      best = std::min(best, numerics::minimize_unimodal(p, 0.0, chi_max, 1e-12).value);
    }
  }
  return best;
}

inline CheckResult check_symmetry(std::size_t samples) {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const SearchInstance instance = random_instance(rng);
    const double mu = unit(rng);
    const Matrix2 u = symmetry_operator(instance).matrix();
    const Matrix2 lhs = u * build_hamiltonian(instance, mu).matrix() * u;
    const Matrix2 rhs =
        build_hamiltonian(instance, 1.0 - mu).matrix() + Matrix2::identity() * symmetry_shift(mu);
    worst = std::max(worst, (lhs - rhs).max_abs());
  }
  return {"symmetry U H(mu) U = H(1-mu) + (1-2mu) 1", worst <= 1e-13, worst, 1e-13,
          std::to_string(samples) + " random (N, M, mu)"};
}

inline CheckResult check_gap_law(std::size_t samples) {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const SearchInstance instance = random_instance(rng);
    const double mu = unit(rng);
    const double gap = spectrum(build_hamiltonian(instance, mu)).gap;
    worst = std::max(worst, std::abs(gap - gap_closed_form(instance, mu)));
  }
  return {"gap law", worst <= 1e-12, worst, 1e-12, std::to_string(samples) + " random (N, M, mu)"};
}

inline CheckResult check_overlap_formula(std::size_t samples) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const SearchInstance instance = random_instance(rng);
    const OverlapBundle o = ground_overlaps(instance, random_gamma(rng, instance));
    worst = std::max({worst, std::abs(o.a_sq - o.a_sq_formula), o.symmetry_residual});
  }
  return {"overlap |a|^2 closed form and mu+ symmetry", worst <= 1e-12, worst, 1e-12,
          std::to_string(samples) + " random (N, M, gamma)"};
}

inline CheckResult check_optimal_time_quadrature(std::size_t samples) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const SearchInstance instance = random_instance(rng);
    const double eps = 0.005 + 0.5 * unit(rng);
    const auto params = ScheduleParams::make(instance, random_gamma(rng, instance), eps,
                                             ScheduleKind::OptimalPath);
    const double closed = optimal_shot_time(instance, params);
    worst = std::max(worst, std::abs(quadrature_shot_time(instance, params) - closed) / closed);
  }
  return {"optimal-path shot time vs quadrature", worst <= 1e-8, worst, 1e-8,
          std::to_string(samples) + " random parameter sets, relative error"};
}

inline CheckResult check_constant_rate_branches() {
  const SearchInstance instance(1'000'000, 1);
  const double branch = closed_form::constant_rate_branch_point();
  double worst = std::abs(closed_form::scaled_constant_rate_time_endpoint_branch(branch) -
                          closed_form::scaled_constant_rate_time_interior_branch(branch));
  bool passed = worst <= 1e-12;
  double worst_relative = 0.0;
  for (const double gamma : {0.2, branch, 0.5, 1.0}) {
    const auto params = ScheduleParams::make(instance, gamma, 0.05, ScheduleKind::ConstantRate);
    const ConstantRatePlan plan = constant_rate_shot_time(instance, params);
    const double formula = constant_rate_shot_time_formula(instance, params);
    worst_relative = std::max(worst_relative, std::abs(plan.total_time - formula) / formula);
    passed = passed && plan.interior == (gamma > branch);
  }
  passed = passed && worst_relative <= 1e-2;
  return {"constant-rate shot time branches", passed, worst_relative, 1e-2,
          "continuity residual " + std::to_string(worst) + ", critical point placement checked"};
}

inline CheckResult check_bound_tightness() {
  double worst = 0.0;
  for (const double a_sq : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    worst = std::max(worst, std::abs(grid_minimum_interference(a_sq) - worst_case_bound(a_sq)));
  }
  return {"worst-case bound equals interference minimum", worst <= 1e-10, worst, 1e-10,
          "a^2 in {0, 0.25, 0.5, 0.75, 1}"};
}

inline CheckResult check_counterexample() {
  // |0> -> |1> through (|0> + |1>)/sqrt 2.
  const State2 start{1.0, 0.0};
  const State2 target{0.0, 1.0};
  const State2 middle{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  const double flawed = std::norm(inner(start, middle)) * std::norm(inner(target, middle));
  const double truth = interference_probability(
      InterferenceParams::make(0.5, 1.0 / std::numbers::sqrt2, std::numbers::pi));
  const double residual = std::max(std::abs(truth), std::abs(flawed - 0.25));
  return {"extreme counterexample", residual <= 1e-14, residual, 1e-14,
          "flawed " + std::to_string(flawed) + " vs true " + std::to_string(truth)};
}

inline CheckResult check_sudden_limit() {
  double worst = 0.0;
  for (const auto& [n, m] : {std::pair<std::uint64_t, std::uint64_t>{8, 2}, {1024, 1},
                             {1'000'000, 5}}) {
    const SearchInstance instance(n, m);
    const auto params = ScheduleParams::make(instance, 0.0, 0.05, ScheduleKind::ConstantRate);
    worst = std::max(worst,
                     std::abs(run_protocol(instance, params).p_success - sudden_limit(instance)));
  }
  return {"sudden limit p = M/N", worst <= 1e-12, worst, 1e-12, "(8,2), (1024,1), (1e6,5)"};
}

inline CheckResult check_oracle_equivalence(Level level) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cases{{16, 1}, {256, 3}};
  if (level == Level::Full) {
    cases = {{2, 1}, {16, 1}, {16, 3}, {256, 1}, {256, 3}, {1024, 1}, {1024, 3}};
  }
  FullOptions options;
  options.evolution.tolerance = 1e-10;
  options.evolution.max_steps = std::size_t{1} << 24;
  double worst = 0.0;
  double worst_leak = 0.0;
  for (const auto& [n, m] : cases) {
    const SearchInstance instance(n, m);
    const double gamma = std::min(0.5, 0.9 * max_gamma(instance));
    const auto params = ScheduleParams::make(instance, gamma, 0.05, ScheduleKind::ConstantRate);
    const Schedule schedule = build_schedule(instance, params, kProtocolScheduleResolution);
    const ReducedEvolution reduced = evolve_reduced_converged(
        instance, schedule, xi_state(reduce_instance(instance)), options.evolution);
    const FullEvolution full = evolve_full_converged(FullInstance::leading(instance), schedule,
                                                     options);
    worst = std::max(worst, std::abs(full.p_success - std::norm(reduced.state.beta)));
    worst_leak = std::max(worst_leak, full.reduced_projection_error);
  }
  return {"reduced vs full-N oracle", worst <= 1e-8 && worst_leak <= 1e-8,
          std::max(worst, worst_leak), 1e-8,
          "max |dp| " + std::to_string(worst) + ", leakage " + std::to_string(worst_leak)};
}

inline CheckResult check_dynamical_floor() {
  const SearchInstance instance(1024, 1);
  const auto params = ScheduleParams::make(instance, 0.5, 0.02, ScheduleKind::ConstantRate);
  const ProtocolRun run = simulate_protocol(instance, params);
  const double margin = run.result.p_success - (run.result.p_bound - 0.05);
  return {"simulated success above worst-case floor", margin >= 0.0 && run.norm_drift <= 1e-9,
          run.norm_drift, 1e-9,
          "p_sim " + std::to_string(run.result.p_success) + " vs p_bound " +
              std::to_string(run.result.p_bound)};
}

inline CheckResult check_optimizer() {
  const SearchInstance instance(1'000'000'000'000ULL, 1);
  const double eps = 0.05;
  const GammaOptimum best = optimize_gamma(instance, eps, ScheduleKind::ConstantRate,
                                           ProbabilityModel::AsymptoticLeadingOrder);
  const double scaled = best.expected / closed_form::time_unit(instance, eps);
  const double residual =
      std::max(std::abs(best.gamma_star - 0.5), std::abs(scaled - 4.0 / (3.0 * std::sqrt(3.0))));
  return {"gamma optimizer", residual <= 1e-3, residual, 1e-3,
          "gamma* " + std::to_string(best.gamma_star) + ", scaled runtime " +
              std::to_string(scaled)};
}

inline CheckResult check_scaling() {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double worst = 0.0;
  for (const auto& kind : {ScheduleKind::ConstantRate, ScheduleKind::OptimalPath}) {
    sx = sy = sxx = sxy = 0.0;
    int count = 0;
    for (const std::uint64_t ratio : {1'000ULL, 10'000ULL, 100'000ULL, 1'000'000ULL}) {
      const SearchInstance instance(ratio, 1);
      const auto params = ScheduleParams::make(instance, 0.5, 0.05, kind);
      const double x = std::log(static_cast<double>(ratio));
      const double y = std::log(shot_time(instance, params));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    worst = std::max(worst, std::abs(slope - 0.5));
  }
  return {"shot time scales as sqrt(N/M)", worst <= 1e-2, worst, 1e-2,
          "log-log slope deviation from 1/2"};
}

inline std::vector<CheckResult> run_all(Level level) {
  const std::size_t samples = level == Level::Fast ? 1000 : 10000;
  std::vector<CheckResult> out;
  out.push_back(check_symmetry(samples));
  out.push_back(check_gap_law(samples));
  out.push_back(check_overlap_formula(samples));
  out.push_back(check_optimal_time_quadrature(level == Level::Fast ? 50 : 500));
  out.push_back(check_constant_rate_branches());
  out.push_back(check_bound_tightness());
  out.push_back(check_counterexample());
  out.push_back(check_sudden_limit());
  out.push_back(check_oracle_equivalence(level));
  out.push_back(check_dynamical_floor());
  out.push_back(check_optimizer());
  out.push_back(check_scaling());
  return out;
}

}  // namespace pasearch::verify
