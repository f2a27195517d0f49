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

// Exact reduced model of the projector search Hamiltonian
//
//   H(mu) = (1 - mu) (1 - |xi><xi|) - mu sum_{x in S} |x><x|
//
// restricted to the invariant plane spanned by |alpha> (uniform over unmarked
// items) and |beta> (uniform over marked items). Every matrix below is written
// in the ordered basis (|alpha>, |beta>).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "pasearch/errors.hpp"

namespace pasearch {

using Complex = std::complex<double>;

class SearchInstance {
 public:
  SearchInstance(std::uint64_t n_total, std::uint64_t n_marked)
      : n_total_(n_total), n_marked_(n_marked) {
    if (n_marked < 1) {
      throw DomainError("n_marked must be >= 1 (got " + std::to_string(n_marked) + ")");
    }
    if (n_marked >= n_total) {
      throw DomainError("n_marked must be < n_total (got M = " + std::to_string(n_marked) +
                        ", N = " + std::to_string(n_total) + ")");
    }
  }

  std::uint64_t n_total() const noexcept { return n_total_; }
  std::uint64_t n_marked() const noexcept { return n_marked_; }
  std::uint64_t n_unmarked() const noexcept { return n_total_ - n_marked_; }

  /// M/N.
  double marked_fraction() const noexcept {
    return static_cast<double>(n_marked_) / static_cast<double>(n_total_);
  }
  /// (N-M)/N, formed from the integer difference rather than 1 - M/N.
  double unmarked_fraction() const noexcept {
    return static_cast<double>(n_unmarked()) / static_cast<double>(n_total_);
  }
  /// M/(N-M).
  double marked_to_unmarked() const noexcept {
    return static_cast<double>(n_marked_) / static_cast<double>(n_unmarked());
  }

  friend bool operator==(const SearchInstance&, const SearchInstance&) = default;

 private:
  std::uint64_t n_total_;
  std::uint64_t n_marked_;
};

/// Components of |xi> = c|alpha> + s|beta>.
struct ReducedBasis {
  double c;
  double s;
};

inline ReducedBasis reduce_instance(const SearchInstance& instance) {
  return {std::sqrt(instance.unmarked_fraction()), std::sqrt(instance.marked_fraction())};
}

struct State2 {
  Complex alpha;
  Complex beta;

  double norm_squared() const { return std::norm(alpha) + std::norm(beta); }
  double norm() const { return std::sqrt(norm_squared()); }
};

/// <lhs|rhs>.
inline Complex inner(const State2& lhs, const State2& rhs) {
  return std::conj(lhs.alpha) * rhs.alpha + std::conj(lhs.beta) * rhs.beta;
}

inline State2 xi_state(const ReducedBasis& basis) { return {basis.c, basis.s}; }
inline State2 beta_state() { return {0.0, 1.0}; }

/// General real 2x2 matrix, row major.
struct Matrix2 {
  double m00, m01, m10, m11;

  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
  }
  friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
    return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
  }
  friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
    return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
  }
  friend Matrix2 operator*(const Matrix2& a, double k) {
    return {a.m00 * k, a.m01 * k, a.m10 * k, a.m11 * k};
  }
  double max_abs() const {
    return std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
  }
  static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

/// Real symmetric 2x2 matrix [[h_aa, h_ab], [h_ab, h_bb]].
struct Hermitian2 {
  double h_aa;
  double h_ab;
  double h_bb;

  Matrix2 matrix() const { return {h_aa, h_ab, h_ab, h_bb}; }

  State2 apply(const State2& v) const {
    return {h_aa * v.alpha + h_ab * v.beta, h_ab * v.alpha + h_bb * v.beta};
  }

  bool is_finite() const {
    return std::isfinite(h_aa) && std::isfinite(h_ab) && std::isfinite(h_bb);
  }
};

inline Hermitian2 build_hamiltonian(const SearchInstance& instance, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw DomainError("mu must lie in [0, 1] (got " + std::to_string(mu) + ")");
  }
  const auto [c, s] = reduce_instance(instance);
  const double w = 1.0 - mu;
  // 1 - |xi><xi| = [[s^2, -cs], [-cs, c^2]]; target projector term is -mu |beta><beta|.
  return {w * instance.marked_fraction(), -w * c * s, w * instance.unmarked_fraction() - mu};
}

/// Closed-form gap sqrt(1 - 4 mu (1 - mu) (1 - M/N)) of H(mu), evaluated as
/// sqrt((1 - 2 mu)^2 + 4 mu (1 - mu) M/N) to avoid cancellation near mu = 1/2.
inline double gap_closed_form(const SearchInstance& instance, double mu) {
  const double distance = 1.0 - 2.0 * mu;
  return std::sqrt(distance * distance + 4.0 * mu * (1.0 - mu) * instance.marked_fraction());
}

struct Spectrum2 {
  double e_ground;
  double e_excited;
  State2 ground;
  State2 excited;
  double gap;
};

/// Closed-form eigendecomposition. The ground vector is phased so its first
/// nonzero component is real positive; the excited vector is its right-hand
/// rotation by 90 degrees.
inline Spectrum2 spectrum(const Hermitian2& h) {
  if (!h.is_finite()) throw DomainError("spectrum: non-finite Hamiltonian entry");
  const double mean = 0.5 * (h.h_aa + h.h_bb);
  const double half_split = 0.5 * (h.h_aa - h.h_bb);
  const double radius = std::hypot(half_split, h.h_ab);
  // h = mean + radius * [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
  const double theta = radius > 0.0 ? 0.5 * std::atan2(h.h_ab, half_split) : 0.0;
  double g_alpha = -std::sin(theta);
  double g_beta = std::cos(theta);
  if (g_alpha < 0.0 || (g_alpha == 0.0 && g_beta < 0.0)) {
    g_alpha = -g_alpha;
    g_beta = -g_beta;
  }
  Spectrum2 out;
  out.e_ground = mean - radius;
  out.e_excited = mean + radius;
  out.ground = {g_alpha, g_beta};
  out.excited = {g_beta, -g_alpha};
  out.gap = 2.0 * radius;
  return out;
}

/// U with U|beta> = |xi> and U|alpha> = -s|alpha> + c|beta>. U is symmetric
/// and involutory. Conjugation maps H(mu) onto H(1 - mu) only up to a multiple
/// of the identity: U H(mu) U = H(1 - mu) + symmetry_shift(mu) * 1.
inline Hermitian2 symmetry_operator(const SearchInstance& instance) {
  const auto [c, s] = reduce_instance(instance);
  return {-s, c, s};
}

/// Energy offset 1 - 2 mu between U H(mu) U and H(1 - mu). The driver term
/// 1 - |xi><xi| has spectrum {0, 1} while the target term -|beta><beta| has
/// {-1, 0}, so no unitary can remove it. Spectral gaps and eigenvectors are
/// unaffected.
inline double symmetry_shift(double mu) { return 1.0 - 2.0 * mu; }

/// Largest window multiplier gamma keeping delta = gamma sqrt(M/(N-M)) < 1/2
/// (exclusive bound).
inline double max_gamma(const SearchInstance& instance) {
  return 0.5 * std::sqrt(static_cast<double>(instance.n_unmarked()) /
                         static_cast<double>(instance.n_marked()));
}

/// delta = gamma sqrt(M/(N-M)). Throws InadmissibleWindow when delta >= 1/2.
inline double window_half_width(const SearchInstance& instance, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be finite and >= 0 (got " + std::to_string(gamma) + ")");
  }
  const double delta = gamma * std::sqrt(instance.marked_to_unmarked());
  if (delta >= 0.5) throw InadmissibleWindow(gamma, max_gamma(instance));
  return delta;
}

struct OverlapBundle {
  /// <lambda_GS(mu-)|xi>, real positive under the phase convention.
  Complex a;
  double a_sq;
  /// 1/2 + (sqrt(M/N) + 2 sqrt(1 - M/N) gamma) / (2 sqrt(1 + 4 gamma^2)).
  double a_sq_formula;
  /// |<xi|GS(mu-)>|^2 |<beta|GS(mu+)>|^2, the product that ignores interference.
  double p_flawed;
  /// (max(0, 2|a|^2 - 1))^2, the floor under maximally destructive interference.
  double p_bound;
  /// |<GS(mu+)|beta> - a|, zero up to rounding by the mu <-> 1-mu symmetry.
  double symmetry_residual;
};

inline double overlap_formula(const SearchInstance& instance, double gamma) {
  const double num =
      std::sqrt(instance.marked_fraction()) + 2.0 * std::sqrt(instance.unmarked_fraction()) * gamma;
  return 0.5 + num / (2.0 * std::sqrt(1.0 + 4.0 * gamma * gamma));
}

inline double bound_from_overlap(double a_sq) {
  const double excess = std::max(0.0, 2.0 * a_sq - 1.0);
  return excess * excess;
}

/// Overlaps at the window mu+- = 1/2 -+ gamma sqrt(M/(N-M)). gamma = 0 gives
/// the degenerate window mu+- = 1/2.
inline OverlapBundle ground_overlaps(const SearchInstance& instance, double gamma) {
  const double delta = window_half_width(instance, gamma);
  const double mu_minus = 0.5 - delta;
  const double mu_plus = 1.0 - mu_minus;
  const ReducedBasis basis = reduce_instance(instance);
  const State2 gs_minus = spectrum(build_hamiltonian(instance, mu_minus)).ground;
  const State2 gs_plus = spectrum(build_hamiltonian(instance, mu_plus)).ground;

  OverlapBundle out;
  out.a = inner(gs_minus, xi_state(basis));
  out.a_sq = std::norm(out.a);
  out.a_sq_formula = overlap_formula(instance, gamma);
  const Complex b_plus = inner(gs_plus, beta_state());
  out.p_flawed = out.a_sq * std::norm(b_plus);
  out.p_bound = bound_from_overlap(out.a_sq);
  out.symmetry_residual = std::abs(b_plus - out.a);
  return out;
}

}  // namespace pasearch
