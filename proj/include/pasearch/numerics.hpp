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
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace pasearch::numerics {

struct Minimum {
  double x;
  double value;
};

/// Minimum of a unimodal function on [lo, hi] by Brent's method. The search
/// runs on the unit interval so the tolerance is relative to the bracket
/// width, not to |x|. `f` is not evaluated at the ends.
template <class F>
Minimum minimize_unimodal(F&& f, double lo, double hi, double x_tolerance,
                                std::size_t max_iterations = 500) {
  const double width = hi - lo;
  const double wanted = std::ceil(std::log2(width / x_tolerance)) + 1.0;
  const int bits = static_cast<int>(
      std::clamp(wanted, 8.0, static_cast<double>(std::numeric_limits<double>::digits)));
  const auto on_unit = [&](double u) { return f(lo + u * width); };
  std::uintmax_t iterations = max_iterations;
  const auto [u, value] =
      boost::math::tools::brent_find_minima(on_unit, 0.0, 1.0, bits, iterations);
  return {lo + u * width, value};
}

struct Integral {
  double value;
  double error_estimate;
};

/// Adaptive 15-point Gauss-Kronrod quadrature of a smooth integrand.
template <class F>
Integral integrate(F&& f, double lo, double hi, double relative_tolerance = 1e-12,
                   unsigned max_depth = 15) {
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), lo, hi, max_depth, relative_tolerance, &error);
  return {value, error};
}

}  // namespace pasearch::numerics
