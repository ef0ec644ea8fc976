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

#include "fluxq/gates.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace fluxq {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit(const StateVector& state, int q, const char* what) {
  if (q < 0 || q >= state.qubit_count()) {
    throw RangeError(std::string(what) + " qubit " + std::to_string(q) +
                     " outside register of " +
                     std::to_string(state.qubit_count()) + " qubits");
  }
}

void check_range(const StateVector& state, QubitRange r) {
  if (r.count < 1 || r.first < 0 ||
      r.first + r.count > state.qubit_count()) {
    throw RangeError("qubit range [" + std::to_string(r.first) + ", " +
                     std::to_string(r.first + r.count) +
                     ") invalid for register of " +
                     std::to_string(state.qubit_count()) + " qubits");
  }
}

}  // namespace

void apply_hadamard(StateVector& state, int qubit) {
  check_qubit(state, qubit, "hadamard");
  const std::uint64_t mask = state.qubit_mask(qubit);
  Complex* amp = state.data();
  const std::uint64_t n = state.size();
  for (std::uint64_t j = 0; j < n; ++j) {
    if (j & mask) continue;
    const Complex a = amp[j];
    const Complex b = amp[j | mask];
    amp[j] = (a + b) * kInvSqrt2;
    amp[j | mask] = (a - b) * kInvSqrt2;
  }
  ++state.tally().single_qubit;
}

void uniform_superposition(StateVector& state) {
  if (std::abs(state[0] - Complex{1.0, 0.0}) > 1e-12 ||
      std::abs(state.norm_squared() - 1.0) > 1e-12) {
    throw InvariantError("uniform_superposition requires the |0...0> state");
  }
  for (int q = 0; q < state.qubit_count(); ++q) apply_hadamard(state, q);
}

void apply_cnot(StateVector& state, int control, int target) {
  check_qubit(state, control, "cnot control");
  check_qubit(state, target, "cnot target");
  if (control == target) {
    throw ConfigError("cnot control and target must differ");
  }
  const std::uint64_t cm = state.qubit_mask(control);
  const std::uint64_t tm = state.qubit_mask(target);
  Complex* amp = state.data();
  const std::uint64_t n = state.size();
  for (std::uint64_t j = 0; j < n; ++j) {
    if ((j & cm) && !(j & tm)) std::swap(amp[j], amp[j | tm]);
  }
  ++state.tally().two_qubit;
}

void apply_controlled_phase_angle(StateVector& state, int control, int target,
                                  double angle) {
  check_qubit(state, control, "controlled-phase control");
  check_qubit(state, target, "controlled-phase target");
  if (control == target) {
    throw ConfigError("controlled-phase control and target must differ");
  }
  const std::uint64_t both = state.qubit_mask(control) | state.qubit_mask(target);
  const Complex phase = std::polar(1.0, angle);
  Complex* amp = state.data();
  const std::uint64_t n = state.size();
  for (std::uint64_t j = 0; j < n; ++j) {
    if ((j & both) == both) amp[j] *= phase;
  }
  ++state.tally().two_qubit;
}

void apply_controlled_phase(StateVector& state, int control, int target,
                            int order) {
  if (order < 1) throw ConfigError("rotation order must be >= 1");
  const double angle = 2.0 * std::numbers::pi / static_cast<double>(1ull << order);
  apply_controlled_phase_angle(state, control, target, angle);
}

void apply_swap(StateVector& state, int a, int b) {
  check_qubit(state, a, "swap");
  check_qubit(state, b, "swap");
  if (a == b) return;
  const std::uint64_t am = state.qubit_mask(a);
  const std::uint64_t bm = state.qubit_mask(b);
  Complex* amp = state.data();
  const std::uint64_t n = state.size();
  for (std::uint64_t j = 0; j < n; ++j) {
    if ((j & am) && !(j & bm)) std::swap(amp[j], amp[(j ^ am) | bm]);
  }
  ++state.tally().swap;
}

void apply_diagonal_phase(StateVector& state,
                          const std::function<double(std::uint64_t)>& f) {
  const std::uint64_t n = state.size();
  Complex* amp = state.data();
  for (std::uint64_t j = 0; j < n; ++j) {
    const double phi = f(j);
    if (!std::isfinite(phi)) {
      throw NumericError("diagonal phase is not finite at basis index " +
                         std::to_string(j));
    }
    amp[j] *= std::polar(1.0, phi);
  }
  ++state.tally().diagonal;
}

void apply_diagonal_phase(StateVector& state, std::span<const double> table) {
  if (table.size() != state.size()) {
    throw RangeError("diagonal phase table has " + std::to_string(table.size()) +
                     " entries, state has " + std::to_string(state.size()));
  }
  Complex* amp = state.data();
  const std::uint64_t n = state.size();
  for (std::uint64_t j = 0; j < n; ++j) amp[j] *= std::polar(1.0, table[j]);
  ++state.tally().diagonal;
}

// The circuit walks qubits MSB-first: a Hadamard on qubit p, then the
// controlled rotations CQ_l for l = 2..n-p conditioned on the deeper
// qubits, low order first. The closing swaps undo the bit reversal so
// the block implements the plain DFT kernel.
void qft(StateVector& state, QubitRange range) {
  check_range(state, range);
  const int n = range.count;
  for (int p = 0; p < n; ++p) {
    apply_hadamard(state, range.first + p);
    for (int c = p + 1; c < n; ++c) {
      apply_controlled_phase(state, range.first + c, range.first + p,
                             c - p + 1);
    }
  }
  for (int p = 0; p < n / 2; ++p) {
    apply_swap(state, range.first + p, range.first + n - 1 - p);
  }
}

void inverse_qft(StateVector& state, QubitRange range) {
  check_range(state, range);
  const int n = range.count;
  for (int p = n / 2 - 1; p >= 0; --p) {
    apply_swap(state, range.first + p, range.first + n - 1 - p);
  }
  for (int p = n - 1; p >= 0; --p) {
    for (int c = n - 1; c > p; --c) {
      const double angle =
          -2.0 * std::numbers::pi / static_cast<double>(1ull << (c - p + 1));
      apply_controlled_phase_angle(state, range.first + c, range.first + p,
                                   angle);
    }
    apply_hadamard(state, range.first + p);
  }
}

}  // namespace fluxq
