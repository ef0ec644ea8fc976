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

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "fluxq/qreg.hpp"
#include "fluxq/rng.hpp"

namespace fluxq::testing {

/// Haar-ish random normalized state (complex gaussian entries).
inline StateVector random_state(int qubits, std::uint64_t seed) {
  StateVector s(qubits);
  Rng rng(derive_seed(seed, 0xabcdull));
  for (std::uint64_t j = 0; j < s.size(); ++j) {
    const double u1 = std::max(rng.uniform(), 1e-300);
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    s[j] = Complex{r * std::cos(2.0 * std::numbers::pi * u2),
                   r * std::sin(2.0 * std::numbers::pi * u2)};
  }
  s.normalize();
  return s;
}

/// Random normalized real state with every |a_j| >= floor.
inline StateVector random_real_state(int qubits, std::uint64_t seed,
                                     double floor = 0.0) {
  StateVector s(qubits);
  Rng rng(derive_seed(seed, 0x5ea1ull));
  for (std::uint64_t j = 0; j < s.size(); ++j) {
    double m = floor + (1.0 - floor) * rng.uniform();
    s[j] = rng.uniform() < 0.5 ? -m : m;
  }
  s.normalize();
  return s;
}

/// Dense matrix of a register-level operation, column by column.
inline Eigen::MatrixXcd
operation_matrix(int qubits, const std::function<void(StateVector&)>& op) {
  const std::uint64_t n = 1ull << qubits;
  Eigen::MatrixXcd m(n, n);
  for (std::uint64_t c = 0; c < n; ++c) {
    StateVector s(qubits);
    s[0] = 0.0;
    s[c] = 1.0;
    op(s);
    for (std::uint64_t r = 0; r < n; ++r) m(r, c) = s[r];
  }
  return m;
}

inline std::complex<double> inner(const StateVector& a, const StateVector& b) {
  std::complex<double> acc = 0.0;
  for (std::uint64_t j = 0; j < a.size(); ++j) {
    acc += std::conj(a[j]) * b[j];
  }
  return acc;
}

inline double max_amp_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::uint64_t j = 0; j < a.size(); ++j) {
    worst = std::max(worst, std::abs(a[j] - b[j]));
  }
  return worst;
}

/// Max amplitude difference after aligning b's global phase to a.
inline double max_amp_diff_up_to_phase(const StateVector& a,
                                       const StateVector& b) {
  const std::complex<double> ov = inner(a, b);
  const std::complex<double> phase =
      std::abs(ov) > 0 ? ov / std::abs(ov) : std::complex<double>{1.0, 0.0};
  double worst = 0.0;
  for (std::uint64_t j = 0; j < a.size(); ++j) {
    worst = std::max(worst, std::abs(a[j] - b[j] / phase));
  }
  return worst;
}

}  // namespace fluxq::testing
