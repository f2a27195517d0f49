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

// Drives the pasearch executable end to end and checks stdout payloads and
// the exit-code contract.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

struct Invocation {
  int exit_code;
  std::string out;
};

Invocation invoke(const std::string& args) {
  const std::string command = std::string(PASEARCH_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  std::string out;
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe)) out += buffer;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "pasearch_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

// Numeric rows of the spectrum CSV, header dropped.
std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

TEST(Cli, spectrum_gap) {
  Invocation r = invoke("spectrum --n 4 --m 1 --mu 0.5");
  ASSERT_EQ(r.exit_code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u) << r.out;
  EXPECT_EQ(rows[0][0], 0.5);
  EXPECT_NEAR(rows[0][1], 0.5, 1e-12);
  EXPECT_NEAR(rows[0][2], 0.5, 1e-15);

  r = invoke("spectrum --n 2 --m 1 --mu 0");
  ASSERT_EQ(r.exit_code, 0);
  rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u) << r.out;
  EXPECT_NEAR(rows[0][1], 1.0, 1e-12);

  r = invoke("spectrum --n 10 --m 3");
  ASSERT_EQ(r.exit_code, 0);
  rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 11u) << r.out;
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 7u);
    EXPECT_NEAR(row[1], row[2], 1e-12) << row[0];
  }
  EXPECT_NEAR(rows.front()[1], 1.0, 1e-12);
  EXPECT_NEAR(rows.back()[1], 1.0, 1e-12);

  EXPECT_NE(invoke("spectrum --n 3 --m 3 --mu 0.5").exit_code, 0);
}

TEST(Cli, run_reports_protocol_result) {
  const Invocation r = invoke("run --n 1024 --m 1 --gamma 0.5 --eps 0.02 --kind constant");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"p_success", "p_bound", "p_flawed", "ground_fidelity_final", "shot_time",
                          "expected_runtime"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.size(), 6u);
  EXPECT_GE(j["p_success"].get<double>(), j["p_bound"].get<double>() - 0.05);
}

TEST(Cli, run_sudden_limit) {
  const Invocation r = invoke("run --n 8 --m 2 --gamma 1e-9");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["p_success"].get<double>(), 0.25, 1e-9);
}

TEST(Cli, run_full_oracle) {
  const Invocation r = invoke("run --n 256 --m 3 --gamma 0.5 --eps 0.05 --full --tolerance 1e-10");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["full_discrepancy"].get<double>(), 1e-8);
  EXPECT_LE(j["full_leakage"].get<double>(), 1e-8);
}

TEST(Cli, exit_codes) {
  EXPECT_EQ(invoke("run --n 2 --m 1 --gamma 0.7").exit_code, 2);
  EXPECT_EQ(invoke("run --n 4096 --m 1 --gamma 0.5 --full --n-cap 1024").exit_code, 3);
  EXPECT_EQ(invoke("run --n 2000000 --m 1 --gamma 0.5 --full").exit_code, 3);
  EXPECT_EQ(invoke("sweep --n 64 --m 1 --gamma 0.5 --out /nonexistent-dir/x.csv").exit_code, 4);
  EXPECT_EQ(invoke("run --n 16 --m 1 --kind sideways").exit_code, 1);
}

TEST(Cli, sweep_is_deterministic_and_reports_skips) {
  const auto dir = scratch_dir();
  const std::string args = "sweep --n 64 1024 --m 1 --gamma 0.1 0.5 1.0 --eps 0.1 --out ";
  ASSERT_EQ(invoke(args + (dir / "a.csv").string()).exit_code, 0);
  ASSERT_EQ(invoke(args + (dir / "b.csv").string() + " --parallel 3").exit_code, 0);
  const std::string a = slurp(dir / "a.csv");
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 7);

  ASSERT_EQ(invoke("sweep --n 2 --m 1 --gamma 1.0 --out " + (dir / "empty.csv").string()).exit_code, 0);
  EXPECT_EQ(slurp(dir / "empty.csv"),
            "n,m,gamma,epsilon,kind,shot_time,p_sim,p_bound,p_flawed,p_asymptotic,"
            "expected_runtime,ground_fidelity\n");
  EXPECT_FALSE(slurp(dir / "empty.csv.skipped.txt").empty());
}

TEST(Cli, optimize) {
  Invocation r = invoke("optimize --n 1000000000000 --m 1 --eps 0.05 --kind constant --model asymptotic");
  ASSERT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["gamma_star"].get<double>(), 0.5, 1e-3);
  EXPECT_NEAR(j["expected"].get<double>() * 0.05 * 1e-6, 4.0 / (3.0 * std::sqrt(3.0)), 1e-3);

  r = invoke("optimize --n 1000000 --m 1 --kind optimal --model asymptotic");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["gamma_star"].get<double>(), 0.05, 1e-3);
}
