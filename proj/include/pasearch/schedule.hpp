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
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pasearch/errors.hpp"
#include "pasearch/numerics.hpp"
#include "pasearch/spectral.hpp"

namespace pasearch {

enum class ScheduleKind { ConstantRate, OptimalPath };

inline std::string_view to_string(ScheduleKind kind) {
  return kind == ScheduleKind::ConstantRate ? "constant" : "optimal";
}

inline std::optional<ScheduleKind> parse_schedule_kind(std::string_view token) {
  if (token == "constant") return ScheduleKind::ConstantRate;
  if (token == "optimal") return ScheduleKind::OptimalPath;
  return std::nullopt;
}

/// Upper limit on d(mu)/dt. The limit is unbounded exactly at mu = 1/2.
class RateLimit {
 public:
  static RateLimit unbounded() { return RateLimit(std::numeric_limits<double>::infinity()); }
  static RateLimit finite(double value) { return RateLimit(value); }

  bool is_unbounded() const { return std::isinf(value_); }
  /// +inf when unbounded.
  double value() const { return value_; }
  /// dt/dmu along a saturating path; 0 when unbounded.
  double inverse() const { return is_unbounded() ? 0.0 : 1.0 / value_; }

 private:
  explicit RateLimit(double value) : value_(value) {}
  double value_;
};

inline void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("epsilon must lie in (0, 1) (got " + std::to_string(epsilon) + ")");
  }
}

/// eps (1 - 4 mu (1-mu) (1-M/N))^{3/2} / ((1-M/N) |1 - 2 mu|).
///
/// The absolute value makes the bound symmetric about mu = 1/2; the signed
/// denominator would give a negative "limit" on the upper half of the path.
inline RateLimit rate_bound(const SearchInstance& instance, double mu, double epsilon) {
  check_epsilon(epsilon);
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw DomainError("mu must lie in [0, 1] (got " + std::to_string(mu) + ")");
  }
  const double distance = std::abs(1.0 - 2.0 * mu);
  if (distance == 0.0) return RateLimit::unbounded();
  const double unmarked = instance.unmarked_fraction();
  const double gap_sq =
      distance * distance + 4.0 * mu * (1.0 - mu) * instance.marked_fraction();
  return RateLimit::finite(epsilon * gap_sq * std::sqrt(gap_sq) / (unmarked * distance));
}

class ScheduleParams {
 public:
  /// gamma = 0 is accepted and describes the sudden limit (empty window).
  static ScheduleParams make(const SearchInstance& instance, double gamma, double epsilon,
                             ScheduleKind kind) {
    check_epsilon(epsilon);
    const double delta = window_half_width(instance, gamma);
    return ScheduleParams(gamma, epsilon, delta, kind);
  }

  double gamma() const noexcept { return gamma_; }
  double epsilon() const noexcept { return epsilon_; }
  double delta() const noexcept { return delta_; }
  double mu_minus() const noexcept { return mu_minus_; }
  double mu_plus() const noexcept { return mu_plus_; }
  ScheduleKind kind() const noexcept { return kind_; }
  bool is_sudden() const noexcept { return delta_ == 0.0; }

  ScheduleParams with_kind(ScheduleKind kind) const {
    return ScheduleParams(gamma_, epsilon_, delta_, kind);
  }

 private:
  ScheduleParams(double gamma, double epsilon, double delta, ScheduleKind kind)
      : gamma_(gamma),
        epsilon_(epsilon),
        delta_(delta),
        mu_minus_(0.5 - delta),
        mu_plus_(1.0 - mu_minus_),
        kind_(kind) {}

  double gamma_;
  double epsilon_;
  double delta_;
  double mu_minus_;
  double mu_plus_;
  ScheduleKind kind_;
};

// Closed forms in units of sqrt(N/M)/eps. They follow from integrating the
// rate bound exactly (optimal path) and from minimizing it over the window
// (constant rate), and hold for every M < N.
namespace closed_form {

inline double asymptotic_success_probability(double gamma) {
  const double g2 = 4.0 * gamma * gamma;
  return g2 / (1.0 + g2);
}

/// 1 - 1/sqrt(1 + 4 gamma^2), evaluated without cancellation at small gamma.
inline double scaled_optimal_time(double gamma) {
  return -std::expm1(-0.5 * std::log1p(4.0 * gamma * gamma));
}

inline double constant_rate_branch_point() { return 1.0 / (2.0 * std::sqrt(2.0)); }

inline double scaled_constant_rate_time_endpoint_branch(double gamma) {
  const double g2 = 4.0 * gamma * gamma;
  return g2 / std::pow(1.0 + g2, 1.5);
}

inline double scaled_constant_rate_time_interior_branch(double gamma) {
  return 4.0 * gamma / (3.0 * std::sqrt(3.0));
}

inline double scaled_constant_rate_time(double gamma) {
  return gamma <= constant_rate_branch_point()
             ? scaled_constant_rate_time_endpoint_branch(gamma)
             : scaled_constant_rate_time_interior_branch(gamma);
}

/// sqrt(N/M) / eps.
inline double time_unit(const SearchInstance& instance, double epsilon) {
  return std::sqrt(static_cast<double>(instance.n_total()) /
                   static_cast<double>(instance.n_marked())) /
         epsilon;
}

/// Interior stationary point of the rate bound, 1/2 + sqrt(M/(N-M)) / (2 sqrt 2).
inline double interior_critical_mu(const SearchInstance& instance) {
  return 0.5 + std::sqrt(instance.marked_to_unmarked()) / (2.0 * std::sqrt(2.0));
}

}  // namespace closed_form

/// (1/eps) sqrt(N/M) (1 - 1/sqrt(4 gamma^2 + 1)): the time to traverse the
/// window while saturating the rate bound at every point.
inline double optimal_shot_time(const SearchInstance& instance, const ScheduleParams& params) {
  return closed_form::time_unit(instance, params.epsilon()) *
         closed_form::scaled_optimal_time(params.gamma());
}

/// Constant-rate shot time from the piecewise closed form.
inline double constant_rate_shot_time_formula(const SearchInstance& instance,
                                              const ScheduleParams& params) {
  return closed_form::time_unit(instance, params.epsilon()) *
         closed_form::scaled_constant_rate_time(params.gamma());
}

/// Eq. (2) over Eq. (1): the price of holding d(mu)/dt fixed.
inline double overhead_ratio(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("overhead_ratio: gamma must be > 0");
  return closed_form::scaled_constant_rate_time(gamma) / closed_form::scaled_optimal_time(gamma);
}

struct ConstantRatePlan {
  RateLimit rate = RateLimit::unbounded();
  double total_time = 0.0;
  /// Where the bound is tightest, reported on the upper half of the window.
  double critical_mu = 0.5;
  bool interior = false;
};

/// The fastest uniform rate admissible over the whole window is the minimum
/// of the rate bound there. The bound is symmetric about 1/2, so only
/// (1/2, mu+] is searched; the singular midpoint is never evaluated.
inline ConstantRatePlan constant_rate_shot_time(const SearchInstance& instance,
                                                const ScheduleParams& params) {
  ConstantRatePlan plan;
  if (params.is_sudden()) return plan;
  const double eps = params.epsilon();
  const double hi = params.mu_plus();
  const auto bound = [&](double mu) { return rate_bound(instance, mu, eps).value(); };
  const numerics::Minimum inner =
      numerics::minimize_unimodal(bound, 0.5, hi, 1e-13 * params.delta());
  const double at_end = bound(hi);
  const bool interior = (hi - inner.x) > 1e-9 * params.delta() && inner.value < at_end;
  plan.critical_mu = interior ? inner.x : hi;
  plan.rate = RateLimit::finite(interior ? inner.value : at_end);
  plan.interior = interior;
  plan.total_time = 2.0 * params.delta() / plan.rate.value();
  return plan;
}

/// Shot time of the schedule family selected by params.kind().
inline double shot_time(const SearchInstance& instance, const ScheduleParams& params) {
  return params.kind() == ScheduleKind::ConstantRate
             ? constant_rate_shot_time(instance, params).total_time
             : optimal_shot_time(instance, params);
}

struct ScheduleSample {
  double t;
  double mu;
};

/// A realized path mu(t) over [0, total_time], mu(0) = mu-, mu(T) = mu+.
///
/// The optimal path is stored as the table of nodes produced by integrating
/// dt/dmu = 1/rate_bound(mu) with fixed-step RK4; mu(t) between nodes is the
/// inverse of the same RK4 step taken from the left node.
class Schedule {
 public:
  static constexpr double kIntegrationTolerance = 1e-8;
  static constexpr std::size_t kMaxHalfSteps = std::size_t{1} << 20;

  static Schedule build(const SearchInstance& instance, const ScheduleParams& params,
                        std::size_t resolution) {
    if (resolution < 2) {
      throw DomainError("schedule resolution must be >= 2 (got " + std::to_string(resolution) +
                        ")");
    }
    Schedule out(instance, params);
    if (params.is_sudden()) {
      out.samples_.push_back({0.0, 0.5});
      return out;
    }
    if (params.kind() == ScheduleKind::ConstantRate) {
      const ConstantRatePlan plan = constant_rate_shot_time(instance, params);
      out.rate_ = plan.rate.value();
      out.total_time_ = plan.total_time;
    } else {
      out.integrate_optimal_path();
    }
    out.samples_.reserve(resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
      const double t = out.total_time_ * static_cast<double>(j) / static_cast<double>(resolution - 1);
      out.samples_.push_back({t, out.mu_at(t)});
    }
    out.samples_.back() = {out.total_time_, params.mu_plus()};
    return out;
  }

  const SearchInstance& instance() const noexcept { return instance_; }
  const ScheduleParams& params() const noexcept { return params_; }
  double total_time() const noexcept { return total_time_; }
  const std::vector<ScheduleSample>& samples() const noexcept { return samples_; }
  /// Number of RK4 half-window steps used for the optimal path (0 otherwise).
  std::size_t integration_steps() const noexcept { return half_steps_; }

  double mu_at(double t) const {
    if (params_.is_sudden()) return 0.5;
    if (t <= 0.0) return params_.mu_minus();
    if (t >= total_time_) return params_.mu_plus();
    if (params_.kind() == ScheduleKind::ConstantRate) {
      return std::min(params_.mu_plus(), params_.mu_minus() + rate_ * t);
    }
    return invert_optimal(t);
  }

  /// d(mu)/dt at time t; +inf where an optimal path crosses mu = 1/2.
  double rate_at(double t) const {
    if (params_.is_sudden()) return std::numeric_limits<double>::infinity();
    if (params_.kind() == ScheduleKind::ConstantRate) return rate_;
    return rate_bound(instance_, mu_at(t), params_.epsilon()).value();
  }

 private:
  struct Node {
    double mu;
    double t;
  };

  Schedule(const SearchInstance& instance, const ScheduleParams& params)
      : instance_(instance), params_(params) {}

  double inverse_rate(double mu) const {
    return rate_bound(instance_, mu, params_.epsilon()).inverse();
  }

  /// One RK4 step of dt/dmu = g(mu) from (mu0, g0) to mu0 + h.
  double rk4_step(double mu0, double g0, double h) const {
    return h / 6.0 * (g0 + 4.0 * inverse_rate(mu0 + 0.5 * h) + inverse_rate(mu0 + h));
  }

  std::vector<Node> integrate_half_steps(std::size_t half_steps) const {
    // mu = 1/2 is a node: the integrand has a kink there.
    std::vector<Node> nodes;
    nodes.reserve(2 * half_steps + 1);
    const double lo = params_.mu_minus();
    const double hi = params_.mu_plus();
    double t = 0.0;
    nodes.push_back({lo, 0.0});
    for (const auto& [a, b] : {std::pair{lo, 0.5}, std::pair{0.5, hi}}) {
      const double h = (b - a) / static_cast<double>(half_steps);
      for (std::size_t k = 0; k < half_steps; ++k) {
        const double mu0 = a + h * static_cast<double>(k);
        t += rk4_step(mu0, inverse_rate(mu0), h);
        const double mu1 = (k + 1 == half_steps) ? b : a + h * static_cast<double>(k + 1);
        nodes.push_back({mu1, t});
      }
    }
    return nodes;
  }

  void integrate_optimal_path() {
    std::size_t n = 8;
    std::vector<Node> coarse = integrate_half_steps(n);
    while (true) {
      std::vector<Node> fine = integrate_half_steps(2 * n);
      const double previous = coarse.back().t;
      const double current = fine.back().t;
      n *= 2;
      coarse = std::move(fine);
      if (std::abs(current - previous) <= kIntegrationTolerance * current || n >= kMaxHalfSteps) {
        break;
      }
    }
    nodes_ = std::move(coarse);
    half_steps_ = n;
    total_time_ = nodes_.back().t;
  }

  double invert_optimal(double t) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                               [](double value, const Node& node) { return value < node.t; });
    const Node& left = *(it - 1);
    const double right_mu = it == nodes_.end() ? params_.mu_plus() : it->mu;
    const double target = t - left.t;
    const double g0 = inverse_rate(left.mu);
    double lo = left.mu;
    double hi = right_mu;
    // Bisection on the monotone RK4 step function.
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (rk4_step(left.mu, g0, mid - left.mu) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  SearchInstance instance_;
  ScheduleParams params_;
  double total_time_ = 0.0;
  double rate_ = std::numeric_limits<double>::infinity();
  std::vector<Node> nodes_;
  std::size_t half_steps_ = 0;
  std::vector<ScheduleSample> samples_;
};

inline Schedule build_schedule(const SearchInstance& instance, const ScheduleParams& params,
                               std::size_t resolution) {
  return Schedule::build(instance, params, resolution);
}

/// (shot_time + per_shot_overhead) / p_success.
inline double expected_runtime(const SearchInstance& instance, const ScheduleParams& params,
                               double p_success, double per_shot_overhead = 0.0) {
  if (p_success == 0.0) throw ZeroSuccessProbability();
  if (!(p_success > 0.0 && p_success <= 1.0)) {
    throw DomainError("p_success must lie in (0, 1] (got " + std::to_string(p_success) + ")");
  }
  if (!(per_shot_overhead >= 0.0)) throw DomainError("per_shot_overhead must be >= 0");
  return (shot_time(instance, params) + per_shot_overhead) / p_success;
}

enum class ProbabilityModel { WorstCaseBound, AsymptoticLeadingOrder };

inline std::string_view to_string(ProbabilityModel model) {
  return model == ProbabilityModel::WorstCaseBound ? "bound" : "asymptotic";
}

inline std::optional<ProbabilityModel> parse_probability_model(std::string_view token) {
  if (token == "bound") return ProbabilityModel::WorstCaseBound;
  if (token == "asymptotic") return ProbabilityModel::AsymptoticLeadingOrder;
  return std::nullopt;
}

struct GammaSearch {
  double gamma_lo = 0.05;
  double gamma_hi = 5.0;
  double tolerance = 1e-5;
  double per_shot_overhead = 0.0;
};

struct GammaOptimum {
  double gamma_star;
  double expected;
};

/// Success probability of one shot under the chosen model.
inline double model_success_probability(const SearchInstance& instance, double gamma,
                                        ProbabilityModel model) {
  return model == ProbabilityModel::AsymptoticLeadingOrder
             ? closed_form::asymptotic_success_probability(gamma)
             : ground_overlaps(instance, gamma).p_bound;
}

/// Brent minimization of the expected runtime over gamma. The search
/// bracket is clipped to the admissible window; its ends are also evaluated so
/// a boundary minimum is reported exactly.
inline GammaOptimum optimize_gamma(const SearchInstance& instance, double epsilon,
                                   ScheduleKind kind, ProbabilityModel model,
                                   const GammaSearch& search = {}) {
  check_epsilon(epsilon);
  const double hi = std::min(search.gamma_hi, max_gamma(instance) * (1.0 - 1e-9));
  const double lo = search.gamma_lo;
  if (!(lo > 0.0) || !(hi > lo)) {
    throw DomainError("optimize_gamma: empty feasible gamma range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  const auto cost = [&](double gamma) {
    const ScheduleParams params = ScheduleParams::make(instance, gamma, epsilon, kind);
    return expected_runtime(instance, params,
                            model_success_probability(instance, gamma, model),
                            search.per_shot_overhead);
  };
  const numerics::Minimum inner = numerics::minimize_unimodal(cost, lo, hi, search.tolerance);
  GammaOptimum best{inner.x, inner.value};
  for (const double edge : {lo, hi}) {
    const double value = cost(edge);
    if (value < best.expected) best = {edge, value};
  }
  return best;
}

}  // namespace pasearch
