// Copyright 2026 The fluxq authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "fluxq/qreg.hpp"

using namespace fluxq;

namespace {

GridSpec make_grid(int dof, int l) {
  GridSpec g;
  g.dof = dof;
  g.qubits_per_dof = l;
  g.dx.assign(dof, 1.0);
  g.mass.assign(dof, 1.0);
  g.dt = GridSpec::consistent_dt(1.0, 1.0, l);
  return g;
}

}  // namespace

TEST_CASE("new_register puts all qubits in |0>") {
  auto s1 = new_register(1);
  CHECK(s1.size() == 2);
  CHECK(s1[0] == Complex{1.0, 0.0});
  CHECK(s1[1] == Complex{0.0, 0.0});

  auto s3 = new_register(3);
  CHECK(s3[0] == Complex{1.0, 0.0});
  for (std::uint64_t j = 1; j < 8; ++j) CHECK(s3[j] == Complex{0.0, 0.0});

  CHECK_THROWS_AS(new_register(0), ConfigError);
  CHECK_THROWS_AS(new_register(kMaxQubits + 1), ConfigError);
}

TEST_CASE("grid/index mapping matches the two-degree worked example") {
  const auto grid = make_grid(2, 2);
  // x = 2*dx, y = 3*dy encodes as binary 10,11 -> index 11
  CHECK(grid_to_index(std::array<int, 2>{2, 3}, grid) == 11);
  CHECK(grid_to_index(std::array<int, 2>{0, 0}, grid) == 0);
  CHECK(grid_to_index(std::array<int, 2>{3, 3}, grid) == 15);

  CHECK(index_to_grid(11, grid) == std::vector<int>{2, 3});
  CHECK(index_to_grid(0, grid) == std::vector<int>{0, 0});

  const auto grid3 = make_grid(3, 1);
  CHECK(index_to_grid(5, grid3) == std::vector<int>{1, 0, 1});

  CHECK_THROWS_AS(grid_to_index(std::array<int, 2>{4, 0}, grid), RangeError);
  CHECK_THROWS_AS(index_to_grid(16, grid), RangeError);
}

TEST_CASE("grid/index round trip is exact") {
  for (int dof = 1; dof <= 3; ++dof) {
    for (int l = 1; l <= 12 / dof; ++l) {
      const auto grid = make_grid(dof, l);
      for (std::uint64_t j = 0; j < grid.total_points(); ++j) {
        CHECK(grid_to_index(index_to_grid(j, grid), grid) == j);
      }
    }
  }
}

TEST_CASE("grid resonance condition is enforced") {
  auto grid = make_grid(1, 3);
  CHECK_NOTHROW(grid.validate());
  grid.dt *= 1.01;
  CHECK_THROWS_AS(grid.validate(), ConfigError);
  CHECK_THROWS_WITH_AS(grid.validate(), doctest::Contains("consistent dt"),
                       ConfigError);
}

TEST_CASE("measure_all on a delta state always returns that outcome") {
  auto s = new_register(4);
  const auto shots = measure_all(s, 1000, 7);
  REQUIRE(shots.size() == 1);
  CHECK(shots[0].outcome == 0);
  CHECK(shots[0].repeat == 1000);
}

TEST_CASE("measure_all frequencies follow the Born rule") {
  // |0.6|^2 / |0.8|^2 two-level state
  auto s = new_register(1);
  s[0] = 0.6;
  s[1] = 0.8;
  const auto shots = measure_all(s, 200000, 123);
  double f1 = 0.0;
  for (const auto& sh : shots) {
    if (sh.outcome == 1) f1 = static_cast<double>(sh.repeat) / 200000.0;
  }
  CHECK(f1 == doctest::Approx(0.64).epsilon(0.01));
}

TEST_CASE("uniform-state frequencies land within the binomial bound") {
  auto s = new_register(2);
  for (int j = 0; j < 4; ++j) s[j] = 0.5;
  const auto shots = measure_all(s, 1000000, 42);
  REQUIRE(shots.size() == 4);
  for (const auto& sh : shots) {
    const double f = static_cast<double>(sh.repeat) / 1e6;
    // 0.25 +- 0.005 is ~11.5 sigma; deterministic at this seed
    CHECK(std::abs(f - 0.25) < 0.005);
  }
}

TEST_CASE("sampling is deterministic for a fixed seed and seed-sensitive") {
  auto s = new_register(3);
  for (int j = 0; j < 8; ++j) s[j] = std::sqrt(1.0 / 8.0);
  const auto a = measure_all(s, 5000, 99);
  const auto b = measure_all(s, 5000, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].outcome == b[i].outcome);
    CHECK(a[i].repeat == b[i].repeat);
  }
  const auto c = measure_all(s, 5000, 100);
  bool any_diff = c.size() != a.size();
  for (std::size_t i = 0; !any_diff && i < a.size(); ++i) {
    any_diff = a[i].repeat != c[i].repeat;
  }
  CHECK(any_diff);
}

TEST_CASE("sampling chi-square against the Born weights") {
  auto s = new_register(3);
  // asymmetric normalized weights
  double w[8] = {0.3, 0.05, 0.1, 0.02, 0.18, 0.05, 0.2, 0.1};
  for (int j = 0; j < 8; ++j) s[j] = std::sqrt(w[j]);
  const std::uint64_t n = 100000;
  const auto shots = measure_all(s, n, 2024);
  double chi2 = 0.0;
  std::vector<double> counts(8, 0.0);
  for (const auto& sh : shots) counts[sh.outcome] = static_cast<double>(sh.repeat);
  for (int j = 0; j < 8; ++j) {
    const double expect = w[j] * static_cast<double>(n);
    chi2 += (counts[j] - expect) * (counts[j] - expect) / expect;
  }
  // 99.9th percentile of chi^2 with 7 dof is 24.3
  CHECK(chi2 < 24.3);
}

TEST_CASE("measure_all rejects unnormalized states and does not mutate") {
  auto s = new_register(2);
  s[0] = 0.5;  // norm^2 = 0.25
  CHECK_THROWS_AS(measure_all(s, 10, 1), InvariantError);
  s[0] = 1.0;
  s[1] = Complex{0.0, 0.0};
  const auto before = std::vector<Complex>(s.amplitudes().begin(), s.amplitudes().end());
  (void)measure_all(s, 100, 5);
  for (std::uint64_t j = 0; j < s.size(); ++j) CHECK(s[j] == before[j]);
}
