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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fluxq/errors.hpp"

namespace fluxq {

using Complex = std::complex<double>;

/// Hard cap on register size (dense amplitudes).
inline constexpr int kMaxQubits = 26;

/// Norm tolerance demanded of a state before sampling from it.
inline constexpr double kNormTolerance = 1e-9;

/// Discretization of M degrees of freedom on 2^l points each.
///
/// The register has nu = l*M qubits and N = 2^nu basis states. Degree 0
/// occupies the most significant l bits of the basis index; within a
/// degree the most significant bit comes first, so e.g. l=2, M=2,
/// coordinates (2,3) map to index 0b1011 = 11.
struct GridSpec {
  int dof = 1;              // M
  int qubits_per_dof = 1;   // l
  std::vector<double> dx;   // spatial step per degree
  double dt = 0.0;          // time step
  std::vector<double> mass; // particle mass per degree

  int total_qubits() const { return dof * qubits_per_dof; }
  std::uint64_t points_per_dof() const { return 1ull << qubits_per_dof; }
  std::uint64_t total_points() const { return 1ull << total_qubits(); }

  /// The time step that satisfies the resonance condition
  /// mass*dx^2/dt = 2*pi/2^l for the given degree parameters.
  static double consistent_dt(double mass, double dx, int qubits_per_dof);

  /// Checks shapes, positivity, the qubit cap, and the per-degree
  /// resonance condition mass*dx^2/dt = 2*pi/2^l to 1e-12 relative.
  /// Throws ConfigError with a suggested dt on violation.
  void validate() const;
};

/// Counts of elementary operations applied to a state. Diagonal
/// multi-target phases and qubit swaps are tallied separately so that
/// circuit-size claims about one- and two-qubit gates stay exact.
struct GateTally {
  std::uint64_t single_qubit = 0;
  std::uint64_t two_qubit = 0;
  std::uint64_t swap = 0;
  std::uint64_t diagonal = 0;
};

/// Dense 2^nu-amplitude register over the computational (position) basis.
///
/// Qubit q addresses bit (nu-1-q) of the basis index, i.e. qubit 0 is the
/// most significant bit. Mutating operations require exclusive access;
/// concurrent reads are safe.
class StateVector {
 public:
  explicit StateVector(int qubit_count);

  int qubit_count() const { return qubit_count_; }
  std::uint64_t size() const { return amp_.size(); }

  Complex& operator[](std::uint64_t j) { return amp_[j]; }
  const Complex& operator[](std::uint64_t j) const { return amp_[j]; }

  std::span<Complex> amplitudes() { return amp_; }
  std::span<const Complex> amplitudes() const { return amp_; }
  Complex* data() { return amp_.data(); }
  const Complex* data() const { return amp_.data(); }

  double norm_squared() const;
  /// Scales amplitudes to unit norm. Throws ConfigError on a zero vector.
  void normalize();

  /// Bit mask selecting qubit q in a basis index.
  std::uint64_t qubit_mask(int q) const {
    return 1ull << (qubit_count_ - 1 - q);
  }

  GateTally& tally() { return tally_; }
  const GateTally& tally() const { return tally_; }

 private:
  int qubit_count_;
  std::vector<Complex> amp_;
  GateTally tally_;
};

/// Fresh register with every qubit in |0>, i.e. amplitude 1 on index 0.
StateVector new_register(int qubit_count);

/// Basis index for integer grid coordinates (one per degree).
std::uint64_t grid_to_index(std::span<const int> coords, const GridSpec& spec);

/// Integer grid coordinates for a basis index; inverse of grid_to_index.
std::vector<int> index_to_grid(std::uint64_t j, const GridSpec& spec);

/// One measurement outcome aggregated over repeats.
struct Shot {
  std::uint64_t outcome = 0;
  std::uint64_t repeat = 0;
};

/// Born-rule sampling of the full register, aggregated per outcome and
/// sorted by outcome. Outcomes are i.i.d. and deterministic for a fixed
/// seed (shot s draws from stream (seed, s)); the state is not mutated.
/// Throws InvariantError if the state norm deviates from 1 by more than
/// kNormTolerance.
std::vector<Shot> measure_all(const StateVector& state, std::uint64_t n_shots,
                              std::uint64_t rng_seed);

}  // namespace fluxq
