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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pasearch/errors.hpp"
#include "pasearch/schedule.hpp"
#include "pasearch/spectral.hpp"

namespace pasearch {

/// Anything that describes mu(t) on [0, total_time()].
template <class P>
concept MuPath = requires(const P& path, double t) {
  { path.total_time() } -> std::convertible_to<double>;
  { path.mu_at(t) } -> std::convertible_to<double>;
};

struct EvolutionOptions {
  std::size_t initial_steps = 64;
  std::size_t max_steps = std::size_t{1} << 16;
  /// Stop doubling once no amplitude moves by more than this.
  double tolerance = 1e-8;
};

namespace detail {

inline void require_normalized(const State2& state) {
  if (std::abs(state.norm_squared() - 1.0) > 1e-9) {
    throw DomainError("initial state is not normalized (|psi|^2 = " +
                      std::to_string(state.norm_squared()) + ")");
  }
}

/// exp(-i h dt) psi for a frozen real symmetric h, in closed form.
inline State2 propagate(const Hermitian2& h, double dt, const State2& psi) {
  const double mean = 0.5 * (h.h_aa + h.h_bb);
  const double split = 0.5 * (h.h_aa - h.h_bb);
  const double radius = std::hypot(split, h.h_ab);
  const double angle = radius * dt;
  const double cos_a = std::cos(angle);
  // sin(r dt)/r -> dt as r -> 0.
  const double sinc = radius > 0.0 ? std::sin(angle) / radius : dt;
  const Complex phase = std::polar(1.0, -mean * dt);
  const Complex minus_i{0.0, -1.0};
  const Complex alpha =
      cos_a * psi.alpha + minus_i * sinc * (split * psi.alpha + h.h_ab * psi.beta);
  const Complex beta =
      cos_a * psi.beta + minus_i * sinc * (h.h_ab * psi.alpha - split * psi.beta);
  return {phase * alpha, phase * beta};
}

inline double max_amplitude_change(const State2& a, const State2& b) {
  return std::max(std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta));
}

}  // namespace detail

/// Fixed-step evolution of i d|psi>/dt = H(mu(t)) |psi>. Each step applies the
/// exact exponential of H frozen at the step midpoint.
template <MuPath P>
State2 evolve_reduced(const SearchInstance& instance, const P& path, const State2& initial,
                      std::size_t steps) {
  detail::require_normalized(initial);
  if (steps == 0) throw DomainError("evolve_reduced: steps must be >= 1");
  const double total = path.total_time();
  if (total == 0.0) return initial;
  const double dt = total / static_cast<double>(steps);
  State2 psi = initial;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * dt;
    psi = detail::propagate(build_hamiltonian(instance, path.mu_at(t_mid)), dt, psi);
  }
  return psi;
}

struct ReducedEvolution {
  State2 state;
  std::size_t steps;
  /// Largest amplitude change in the last doubling.
  double change;
  bool converged;
};

/// Step doubling until the result is stable to options.tolerance.
template <MuPath P>
ReducedEvolution evolve_reduced_converged(const SearchInstance& instance, const P& path,
                                          const State2& initial,
                                          const EvolutionOptions& options = {}) {
  std::size_t steps = std::max<std::size_t>(1, options.initial_steps);
  State2 coarse = evolve_reduced(instance, path, initial, steps);
  if (path.total_time() == 0.0) return {coarse, steps, 0.0, true};
  while (true) {
    const State2 fine = evolve_reduced(instance, path, initial, 2 * steps);
    const double change = detail::max_amplitude_change(coarse, fine);
    steps *= 2;
    if (change <= options.tolerance) return {fine, steps, change, true};
    if (steps >= options.max_steps) return {fine, steps, change, false};
    coarse = fine;
  }
}

/// Explicit marked set S for the brute-force N-dimensional oracle.
class FullInstance {
 public:
  FullInstance(std::uint64_t n_total, std::vector<std::uint64_t> marked)
      : n_total_(n_total), marked_(std::move(marked)) {
    std::sort(marked_.begin(), marked_.end());
    if (std::adjacent_find(marked_.begin(), marked_.end()) != marked_.end()) {
      throw DomainError("marked indices must be distinct");
    }
    if (marked_.empty() || marked_.size() >= n_total_) {
      throw DomainError("marked set must be nonempty and smaller than N");
    }
    if (marked_.back() >= n_total_) throw DomainError("marked index out of range");
  }

  /// The first `n_marked` indices are marked.
  static FullInstance leading(const SearchInstance& instance) {
    std::vector<std::uint64_t> marked(instance.n_marked());
    for (std::uint64_t i = 0; i < instance.n_marked(); ++i) marked[i] = i;
    return FullInstance(instance.n_total(), std::move(marked));
  }

  std::uint64_t n_total() const noexcept { return n_total_; }
  const std::vector<std::uint64_t>& marked() const noexcept { return marked_; }
  SearchInstance reduced() const { return SearchInstance(n_total_, marked_.size()); }

 private:
  std::uint64_t n_total_;
  std::vector<std::uint64_t> marked_;
};

struct FullState {
  std::vector<Complex> amplitudes;

  double norm_squared() const {
    double sum = 0.0;
    for (const Complex& z : amplitudes) sum += std::norm(z);
    return sum;
  }
};

struct FullOptions {
  EvolutionOptions evolution;
  std::uint64_t max_dimension = std::uint64_t{1} << 20;
};

namespace detail {

/// psi <- exp(-i theta (1 - |xi><xi|)) psi.
inline void apply_driver(std::vector<Complex>& psi, double theta) {
  Complex sum{0.0, 0.0};
  for (const Complex& z : psi) sum += z;
  const Complex mean = sum / static_cast<double>(psi.size());
  const Complex phase = std::polar(1.0, -theta);
  const Complex shift = (1.0 - phase) * mean;
  for (Complex& z : psi) z = phase * z + shift;
}

inline FullState evolve_full_fixed(const FullInstance& full, double total, const auto& mu_at,
                                   std::size_t steps) {
  const auto n = static_cast<std::size_t>(full.n_total());
  FullState state{std::vector<Complex>(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0))};
  if (total == 0.0) return state;
  const double dt = total / static_cast<double>(steps);
  auto& psi = state.amplitudes;
  for (std::size_t k = 0; k < steps; ++k) {
    const double mu = mu_at((static_cast<double>(k) + 0.5) * dt);
    // Strang splitting of (1-mu)(1-|xi><xi|) and -mu P_S; each factor is exact.
    apply_driver(psi, 0.5 * (1.0 - mu) * dt);
    const Complex target_phase = std::polar(1.0, mu * dt);
    for (const std::uint64_t x : full.marked()) psi[x] *= target_phase;
    apply_driver(psi, 0.5 * (1.0 - mu) * dt);
  }
  return state;
}

}  // namespace detail

struct FullEvolution {
  double p_success;
  /// Norm of the part of psi(T) outside span{|alpha>, |beta>}.
  double reduced_projection_error;
  double norm;
  FullState state;
  std::size_t steps;
  bool converged;
};

/// Marked-set probability and distance from the invariant plane, computed
/// from the amplitudes directly rather than via 1 - (projections).
inline FullEvolution summarize_full(const FullInstance& full, FullState state) {
  const auto& psi = state.amplitudes;
  std::vector<char> is_marked(psi.size(), 0);
  for (const std::uint64_t x : full.marked()) is_marked[x] = 1;
  Complex marked_sum{0.0, 0.0};
  Complex unmarked_sum{0.0, 0.0};
  double p_success = 0.0;
  double norm_sq = 0.0;
  for (std::size_t x = 0; x < psi.size(); ++x) {
    norm_sq += std::norm(psi[x]);
    if (is_marked[x]) {
      marked_sum += psi[x];
      p_success += std::norm(psi[x]);
    } else {
      unmarked_sum += psi[x];
    }
  }
  const auto n_marked = static_cast<double>(full.marked().size());
  const Complex marked_mean = marked_sum / n_marked;
  const Complex unmarked_mean = unmarked_sum / (static_cast<double>(psi.size()) - n_marked);
  double leak_sq = 0.0;
  for (std::size_t x = 0; x < psi.size(); ++x) {
    leak_sq += std::norm(psi[x] - (is_marked[x] ? marked_mean : unmarked_mean));
  }
  return {p_success, std::sqrt(leak_sq), std::sqrt(norm_sq), std::move(state), 0, true};
}

/// Brute-force evolution of the uniform superposition in the full
/// N-dimensional space, O(N) per step with no dense matrix.
template <MuPath P>
FullEvolution evolve_full(const FullInstance& full, const P& path, std::size_t steps,
                          const FullOptions& options = {}) {
  if (full.n_total() > options.max_dimension) {
    throw CapacityExceeded("N = " + std::to_string(full.n_total()) +
                           " exceeds the full-simulation cap " +
                           std::to_string(options.max_dimension));
  }
  if (steps == 0) throw DomainError("evolve_full: steps must be >= 1");
  const auto mu_at = [&](double t) { return path.mu_at(t); };
  FullEvolution out = summarize_full(
      full, detail::evolve_full_fixed(full, path.total_time(), mu_at, steps));
  out.steps = steps;
  return out;
}

/// Step doubling on the full state until no amplitude moves by more than
/// options.evolution.tolerance.
template <MuPath P>
FullEvolution evolve_full_converged(const FullInstance& full, const P& path,
                                    const FullOptions& options = {}) {
  if (full.n_total() > options.max_dimension) {
    throw CapacityExceeded("N = " + std::to_string(full.n_total()) +
                           " exceeds the full-simulation cap " +
                           std::to_string(options.max_dimension));
  }
  const auto mu_at = [&](double t) { return path.mu_at(t); };
  const double total = path.total_time();
  std::size_t steps = std::max<std::size_t>(1, options.evolution.initial_steps);
  FullState coarse = detail::evolve_full_fixed(full, total, mu_at, steps);
  bool converged = total == 0.0;
  while (!converged) {
    FullState fine = detail::evolve_full_fixed(full, total, mu_at, 2 * steps);
    double change = 0.0;
    for (std::size_t x = 0; x < fine.amplitudes.size(); ++x) {
      change = std::max(change, std::abs(fine.amplitudes[x] - coarse.amplitudes[x]));
    }
    steps *= 2;
    coarse = std::move(fine);
    converged = change <= options.evolution.tolerance;
    if (steps >= options.evolution.max_steps) break;
  }
  FullEvolution out = summarize_full(full, std::move(coarse));
  out.steps = steps;
  out.converged = converged;
  return out;
}

/// Excited-branch overlap <beta|lambda+^perp> = chi e^{i phi}.
class InterferenceParams {
 public:
  static InterferenceParams make(double a_sq, double chi, double phi) {
    if (!(a_sq >= 0.0 && a_sq <= 1.0)) throw DomainError("a_sq must lie in [0, 1]");
    const double chi_max = std::sqrt(1.0 - a_sq);
    if (!(chi >= 0.0 && chi <= chi_max * (1.0 + 1e-15))) {
      throw DomainError("chi must lie in [0, sqrt(1 - a_sq)] = [0, " + std::to_string(chi_max) +
                        "] (got " + std::to_string(chi) + ")");
    }
    return InterferenceParams(a_sq, std::min(chi, chi_max), phi);
  }

  double a_sq() const noexcept { return a_sq_; }
  double chi() const noexcept { return chi_; }
  double phi() const noexcept { return phi_; }

 private:
  InterferenceParams(double a_sq, double chi, double phi) : a_sq_(a_sq), chi_(chi), phi_(phi) {}
  double a_sq_;
  double chi_;
  double phi_;
};

/// | |a|^2 + sqrt(1-|a|^2) chi e^{i phi} |^2, expanded.
inline double interference_probability(const InterferenceParams& params) {
  const double a_sq = params.a_sq();
  const double chi = params.chi();
  const double p = a_sq * a_sq + (1.0 - a_sq) * chi * chi +
                   2.0 * a_sq * std::sqrt(1.0 - a_sq) * chi * std::cos(params.phi());
  return std::clamp(p, 0.0, 1.0);
}

/// (max(0, 2 a_sq - 1))^2: the minimum of interference_probability over chi, phi.
inline double worst_case_bound(double a_sq) {
  if (!(a_sq >= 0.0 && a_sq <= 1.0)) throw DomainError("a_sq must lie in [0, 1]");
  return bound_from_overlap(a_sq);
}

/// M/N: measuring |xi> directly.
inline double sudden_limit(const SearchInstance& instance) { return instance.marked_fraction(); }

struct ProtocolResult {
  double p_success;
  double p_bound;
  double p_flawed;
  double ground_fidelity_final;
  double shot_time;
  /// +inf when p_success is zero.
  double expected_runtime;
};

struct ProtocolRun {
  ProtocolResult result;
  State2 final_state;
  std::size_t steps;
  bool converged;
  double norm_drift;
};

struct ProtocolOptions {
  /// 0 selects automatic step doubling.
  std::size_t steps = 0;
  EvolutionOptions evolution;
  double per_shot_overhead = 0.0;
};

inline constexpr std::size_t kProtocolScheduleResolution = 65;

/// Prepare |xi>, sweep mu from mu- to mu+, and score a computational-basis
/// measurement against the marked set.
inline ProtocolRun simulate_protocol(const SearchInstance& instance, const ScheduleParams& params,
                                     const ProtocolOptions& options = {}) {
  if (!(options.per_shot_overhead >= 0.0)) throw DomainError("overhead must be >= 0");
  const Schedule schedule = build_schedule(instance, params, kProtocolScheduleResolution);
  const State2 initial = xi_state(reduce_instance(instance));

  ProtocolRun run{};
  if (options.steps == 0) {
    const ReducedEvolution evolution =
        evolve_reduced_converged(instance, schedule, initial, options.evolution);
    run.final_state = evolution.state;
    run.steps = evolution.steps;
    run.converged = evolution.converged;
  } else {
    run.final_state = evolve_reduced(instance, schedule, initial, options.steps);
    run.steps = options.steps;
    run.converged = true;
  }
  run.norm_drift = std::abs(run.final_state.norm() - 1.0);

  const OverlapBundle overlaps = ground_overlaps(instance, params.gamma());
  const State2 ground_final =
      spectrum(build_hamiltonian(instance, params.mu_plus())).ground;
  ProtocolResult& r = run.result;
  r.p_success = std::min(1.0, std::norm(run.final_state.beta));
  r.p_bound = overlaps.p_bound;
  r.p_flawed = overlaps.p_flawed;
  r.ground_fidelity_final = std::min(1.0, std::norm(inner(ground_final, run.final_state)));
  r.shot_time = schedule.total_time();
  r.expected_runtime = r.p_success > 0.0
                           ? (r.shot_time + options.per_shot_overhead) / r.p_success
                           : std::numeric_limits<double>::infinity();
  return run;
}

inline ProtocolResult run_protocol(const SearchInstance& instance, const ScheduleParams& params,
                                   const ProtocolOptions& options = {}) {
  return simulate_protocol(instance, params, options).result;
}

}  // namespace pasearch
