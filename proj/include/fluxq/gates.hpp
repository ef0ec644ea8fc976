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

#include <functional>
#include <span>

#include "fluxq/qreg.hpp"

namespace fluxq {

/// Contiguous block of qubits, e.g. the l qubits of one degree of freedom.
struct QubitRange {
  int first = 0;
  int count = 0;
};

/// Hadamard on qubit q: amplitude pairs (a, b) -> ((a+b), (a-b))/sqrt(2).
void apply_hadamard(StateVector& state, int qubit);

/// Hadamard on every qubit of |0...0>, producing amp[j] = 1/sqrt(N).
/// Throws InvariantError unless the state is |0...0>.
void uniform_superposition(StateVector& state);

/// |e1,e2> -> |e1, (e1+e2) mod 2> on (control, target).
void apply_cnot(StateVector& state, int control, int target);

/// Controlled rotation: |11> on (target, control) gains exp(2*pi*i/2^order).
void apply_controlled_phase(StateVector& state, int control, int target,
                            int order);

/// Controlled rotation with an explicit angle (used for inverse circuits).
void apply_controlled_phase_angle(StateVector& state, int control, int target,
                                  double angle);

/// Exchanges two qubits (pure relabeling of basis indices).
void apply_swap(StateVector& state, int a, int b);

/// amp[j] *= exp(i*f(j)). Throws NumericError naming j if f(j) is not finite.
void apply_diagonal_phase(StateVector& state,
                          const std::function<double(std::uint64_t)>& f);

/// Table form of the diagonal phase; the table must have one entry per
/// basis state and is assumed finite (validated when the table is built).
void apply_diagonal_phase(StateVector& state, std::span<const double> table);

/// Quantum Fourier transform on a qubit block: |j> -> (1/sqrt(n)) *
/// sum_j' exp(+2*pi*i*j*j'/n) |j'> with n = 2^count, reading the block
/// MSB-first. Assembled from count Hadamards, count*(count-1)/2
/// controlled phases, and floor(count/2) closing swaps that undo the
/// bit reversal.
void qft(StateVector& state, QubitRange range);

/// Exact inverse of qft (reversed gate sequence, conjugated phases).
void inverse_qft(StateVector& state, QubitRange range);

}  // namespace fluxq
