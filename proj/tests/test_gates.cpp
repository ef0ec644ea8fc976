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

#include <numbers>

#include "fluxq/gates.hpp"
#include "fluxq/oracle.hpp"
#include "test_util.hpp"

using namespace fluxq;
using fluxq::testing::inner;
using fluxq::testing::max_amp_diff;
using fluxq::testing::operation_matrix;
using fluxq::testing::random_state;

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

TEST_CASE("hadamard acts as the two-column rotation") {
  StateVector s(1);
  apply_hadamard(s, 0);
  CHECK(std::abs(s[0] - kInvSqrt2) < 1e-15);
  CHECK(std::abs(s[1] - kInvSqrt2) < 1e-15);

  StateVector t(1);
  t[0] = 0.0;
  t[1] = 1.0;
  apply_hadamard(t, 0);
  CHECK(std::abs(t[0] - kInvSqrt2) < 1e-15);
  CHECK(std::abs(t[1] + kInvSqrt2) < 1e-15);

  CHECK_THROWS_AS(apply_hadamard(t, 1), RangeError);
}

TEST_CASE("hadamard is an involution on random states") {
  auto s = random_state(3, 11);
  const auto original = s;
  for (int q = 0; q < 3; ++q) {
    apply_hadamard(s, q);
    apply_hadamard(s, q);
  }
  CHECK(max_amp_diff(s, original) < 1e-12);
}

TEST_CASE("uniform superposition from |0...0>") {
  for (int nu : {1, 2, 4}) {
    StateVector s(nu);
    uniform_superposition(s);
    const double want = 1.0 / std::sqrt(static_cast<double>(s.size()));
    for (std::uint64_t j = 0; j < s.size(); ++j) {
      CHECK(std::abs(s[j] - want) < 1e-14);
    }
  }
  StateVector notzero(2);
  notzero[0] = 0.0;
  notzero[3] = 1.0;
  CHECK_THROWS_AS(uniform_superposition(notzero), InvariantError);
}

TEST_CASE("cnot truth table and linearity") {
  // |10> (qubit 0 = 1, qubit 1 = 0) -> |11>
  StateVector s(2);
  s[0] = 0.0;
  s[0b10] = 1.0;
  apply_cnot(s, 0, 1);
  CHECK(std::abs(s[0b11] - 1.0) < 1e-15);

  StateVector z(2);
  apply_cnot(z, 0, 1);
  CHECK(std::abs(z[0] - 1.0) < 1e-15);  // |00> fixed

  StateVector bell(2);
  bell[0] = kInvSqrt2;
  bell[0b10] = kInvSqrt2;
  apply_cnot(bell, 0, 1);
  CHECK(std::abs(bell[0b00] - kInvSqrt2) < 1e-15);
  CHECK(std::abs(bell[0b11] - kInvSqrt2) < 1e-15);

  CHECK_THROWS_AS(apply_cnot(s, 1, 1), ConfigError);
}

TEST_CASE("controlled phase hits only |11>") {
  // order 1: phase pi
  StateVector s(2);
  for (int j = 0; j < 4; ++j) s[j] = 0.5;
  apply_controlled_phase(s, 0, 1, 1);
  CHECK(std::abs(s[0b11] + 0.5) < 1e-15);
  CHECK(std::abs(s[0b01] - 0.5) < 1e-15);
  CHECK(std::abs(s[0b10] - 0.5) < 1e-15);

  // order 2: phase i
  StateVector t(2);
  t[0] = 0.0;
  t[0b11] = 1.0;
  apply_controlled_phase(t, 0, 1, 2);
  CHECK(std::abs(t[0b11] - Complex{0.0, 1.0}) < 1e-15);

  CHECK_THROWS_AS(apply_controlled_phase(t, 0, 1, 0), ConfigError);
}

TEST_CASE("diagonal phases") {
  auto s = random_state(2, 5);
  auto copy = s;
  apply_diagonal_phase(s, [](std::uint64_t) { return 0.0; });
  CHECK(max_amp_diff(s, copy) < 1e-15);

  apply_diagonal_phase(s, [](std::uint64_t) { return std::numbers::pi; });
  for (std::uint64_t j = 0; j < 4; ++j) {
    CHECK(std::abs(s[j] + copy[j]) < 1e-14);
  }

  StateVector u(2);
  uniform_superposition(u);
  apply_diagonal_phase(u, [](std::uint64_t j) { return static_cast<double>(j); });
  for (std::uint64_t j = 0; j < 4; ++j) {
    CHECK(std::abs(u[j] - 0.5 * std::polar(1.0, static_cast<double>(j))) < 1e-14);
  }

  CHECK_THROWS_AS(
      apply_diagonal_phase(u, [](std::uint64_t j) {
        return j == 2 ? std::numeric_limits<double>::infinity() : 0.0;
      }),
      NumericError);
}

TEST_CASE("two diagonal phases commute and compose additively") {
  auto s = random_state(3, 17);
  auto t = s;
  const auto f = [](std::uint64_t j) { return 0.3 * static_cast<double>(j); };
  const auto g = [](std::uint64_t j) { return -1.1 * static_cast<double>(j * j); };
  apply_diagonal_phase(s, f);
  apply_diagonal_phase(s, g);
  apply_diagonal_phase(t, g);
  apply_diagonal_phase(t, f);
  CHECK(max_amp_diff(s, t) < 1e-12);
}

TEST_CASE("qft on one qubit is the hadamard") {
  StateVector s(1);
  qft(s, {0, 1});
  CHECK(std::abs(s[0] - kInvSqrt2) < 1e-15);
  CHECK(std::abs(s[1] - kInvSqrt2) < 1e-15);
}

TEST_CASE("qft of |0...0> is the flat superposition") {
  StateVector s(4);
  qft(s, {0, 4});
  for (std::uint64_t j = 0; j < 16; ++j) {
    CHECK(std::abs(s[j] - 0.25) < 1e-14);
  }
}

TEST_CASE("qft of |1> on three qubits gives the DFT column") {
  StateVector s(3);
  s[0] = 0.0;
  s[1] = 1.0;
  qft(s, {0, 3});
  const double inv = 1.0 / std::sqrt(8.0);
  for (std::uint64_t jp = 0; jp < 8; ++jp) {
    const Complex want =
        std::polar(inv, 2.0 * std::numbers::pi * static_cast<double>(jp) / 8.0);
    CHECK(std::abs(s[jp] - want) < 1e-14);
  }
}

TEST_CASE("gate-level qft equals the dense DFT for 1..8 qubits") {
  for (int n = 1; n <= 8; ++n) {
    const auto m = operation_matrix(n, [n](StateVector& s) { qft(s, {0, n}); });
    const auto want = oracle::dft_matrix(1ull << n);
    CHECK((m - want).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("qft gate tally is n Hadamards and n(n-1)/2 controlled phases") {
  for (int n = 1; n <= 8; ++n) {
    StateVector s(n);
    qft(s, {0, n});
    CHECK(s.tally().single_qubit == static_cast<std::uint64_t>(n));
    CHECK(s.tally().two_qubit == static_cast<std::uint64_t>(n * (n - 1) / 2));
    CHECK(s.tally().swap == static_cast<std::uint64_t>(n / 2));
    CHECK(s.tally().diagonal == 0);
  }
}

TEST_CASE("inverse_qft undoes qft") {
  auto s = random_state(5, 23);
  const auto original = s;
  qft(s, {1, 3});  // sub-range, deliberately not the whole register
  inverse_qft(s, {1, 3});
  CHECK(max_amp_diff(s, original) < 1e-12);

  StateVector u(3);
  uniform_superposition(u);
  inverse_qft(u, {0, 3});
  CHECK(std::abs(u[0] - 1.0) < 1e-12);

  // basis |1> on two qubits -> conjugated DFT column
  StateVector b(2);
  b[0] = 0.0;
  b[1] = 1.0;
  inverse_qft(b, {0, 2});
  const auto want = oracle::dft_matrix(4).conjugate();
  for (std::uint64_t r = 0; r < 4; ++r) {
    CHECK(std::abs(b[r] - want(r, 1)) < 1e-14);
  }
}

TEST_CASE("gates preserve inner products") {
  auto a = random_state(4, 31);
  auto b = random_state(4, 37);
  const Complex before = inner(a, b);
  for (auto* s : {&a, &b}) {
    apply_hadamard(*s, 2);
    apply_cnot(*s, 0, 3);
    apply_controlled_phase(*s, 1, 2, 3);
    qft(*s, {0, 4});
    apply_diagonal_phase(*s, [](std::uint64_t j) { return 0.1 * j; });
    inverse_qft(*s, {1, 2});
  }
  CHECK(std::abs(inner(a, b) - before) < 1e-12);
  CHECK(std::abs(a.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("qft range validation") {
  StateVector s(3);
  CHECK_THROWS_AS(qft(s, {0, 0}), RangeError);
  CHECK_THROWS_AS(qft(s, {2, 2}), RangeError);
  CHECK_THROWS_AS(inverse_qft(s, {-1, 2}), RangeError);
}
