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
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "pasearch/dynamics.hpp"
#include "pasearch/schedule.hpp"
#include "pasearch/spectral.hpp"

namespace pasearch {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, end);
}

struct GammaGrid {
  double start = 0.5;
  double stop = 0.5;
  std::size_t count = 1;

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(count == 1 ? start
                               : start + (stop - start) * static_cast<double>(i) /
                                             static_cast<double>(count - 1));
    }
    return out;
  }
};

struct SweepSpec {
  std::vector<std::uint64_t> n_values;
  std::vector<std::uint64_t> m_values;
  /// Explicit gamma values; when empty, gamma_grid is expanded instead.
  std::vector<double> gamma_values;
  GammaGrid gamma_grid;
  double epsilon = 0.05;
  ScheduleKind kind = ScheduleKind::ConstantRate;
  std::string output_path;
  std::size_t parallel = 1;
  ProtocolOptions protocol;

  std::vector<double> gammas() const {
    return gamma_values.empty() ? gamma_grid.values() : gamma_values;
  }
};

struct SweepRow {
  std::uint64_t n;
  std::uint64_t m;
  double gamma;
  double epsilon;
  ScheduleKind kind;
  double shot_time;
  double p_sim;
  double p_bound;
  double p_flawed;
  double p_asymptotic;
  double expected_runtime;
  double ground_fidelity;
};

inline constexpr const char* kSweepCsvHeader =
    "n,m,gamma,epsilon,kind,shot_time,p_sim,p_bound,p_flawed,p_asymptotic,expected_runtime,"
    "ground_fidelity";

inline std::string format_row(const SweepRow& row) {
  std::string out;
  out += std::to_string(row.n) + ',' + std::to_string(row.m) + ',';
  out += format_double(row.gamma) + ',' + format_double(row.epsilon) + ',';
  out += std::string(to_string(row.kind)) + ',';
  for (const double v : {row.shot_time, row.p_sim, row.p_bound, row.p_flawed, row.p_asymptotic,
                         row.expected_runtime}) {
    out += format_double(v) + ',';
  }
  out += format_double(row.ground_fidelity);
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) os << format_row(row) << '\n';
}

inline SweepRow compute_row(std::uint64_t n, std::uint64_t m, double gamma, double epsilon,
                            ScheduleKind kind, const ProtocolOptions& options) {
  const SearchInstance instance(n, m);
  const auto params = ScheduleParams::make(instance, gamma, epsilon, kind);
  const ProtocolResult r = run_protocol(instance, params, options);
  return {n,
          m,
          gamma,
          epsilon,
          kind,
          r.shot_time,
          r.p_success,
          r.p_bound,
          r.p_flawed,
          closed_form::asymptotic_success_probability(gamma),
          r.expected_runtime,
          r.ground_fidelity_final};
}

struct SweepOutcome {
  std::vector<SweepRow> rows;
  /// One line per skipped grid point, in grid order.
  std::vector<std::string> skipped;
};

/// Evaluates the grid N-major, then M, then gamma. Workers fill a slot per
/// grid point, so the result order never depends on `parallel`.
inline SweepOutcome run_sweep(const SweepSpec& spec) {
  struct Point {
    std::uint64_t n;
    std::uint64_t m;
    double gamma;
  };
  std::vector<Point> points;
  for (const std::uint64_t n : spec.n_values) {
    for (const std::uint64_t m : spec.m_values) {
      for (const double gamma : spec.gammas()) points.push_back({n, m, gamma});
    }
  }

  std::vector<std::optional<SweepRow>> rows(points.size());
  std::vector<std::string> reasons(points.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const Point& p = points[i];
      try {
        rows[i] = compute_row(p.n, p.m, p.gamma, spec.epsilon, spec.kind, spec.protocol);
      } catch (const std::exception& e) {
        reasons[i] = e.what();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, spec.parallel);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SweepOutcome out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (rows[i]) {
      out.rows.push_back(*rows[i]);
    } else {
      const Point& p = points[i];
      out.skipped.push_back("n=" + std::to_string(p.n) + " m=" + std::to_string(p.m) +
                            " gamma=" + format_double(p.gamma) + ": " + reasons[i]);
    }
  }
  return out;
}

}  // namespace pasearch
