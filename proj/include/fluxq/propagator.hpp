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

#include "fluxq/gates.hpp"
#include "fluxq/potential.hpp"
#include "fluxq/qreg.hpp"

namespace fluxq {

/// Precomputed phase tables for one split-operator time step,
///
///   U = D(F2) . QFT . D(F1),
///
/// where per degree (n = 2^l points) F1(j) = -pi*j^2/n is the Fourier
/// chirp, F2(j) = -pi*j^2/n + V(j*dx)*dt adds the potential phase, and
/// the QFT acts on each degree's qubit block. Valid only on grids
/// satisfying mass*dx^2/dt = 2*pi/n per degree, which is what folds the
/// quadratic (j-j')^2 kernel into chirp/QFT/chirp form. The Fourier
/// kinetic term implies periodic boundary conditions.
struct SplitStepPlan {
  GridSpec grid;
  PotentialSpec potential;
  std::vector<double> f1;  // chirp table, one entry per basis state
  std::vector<double> f2;  // chirp + V*dt table
  std::vector<double> v;   // potential table (diagnostics, oracle)

  static SplitStepPlan make(GridSpec grid, PotentialSpec potential);
};

/// Overwrites the register with the given amplitudes. Unit norm within
/// 1e-9 is taken as-is; anything else is normalized with a warning on
/// stderr. A zero vector is a ConfigError.
void load_wavefunction(StateVector& state, std::span<const Complex> amplitudes);

/// Qubits per degree implied by the resonance condition,
/// l = log2(2*pi*dt/(mass*dx^2)). The ratio must be a power of two
/// within 1e-9 relative (and >= 2); otherwise ConfigError with the
/// nearest consistent dt.
int required_qubits(double dx, double dt, double mass);

/// One split-operator step applied in place: D(F1), per-degree QFT, D(F2).
void split_step(StateVector& state, const SplitStepPlan& plan);

/// Gate-level adjoint of split_step (phases negated, inverse QFT).
void split_step_inverse(StateVector& state, const SplitStepPlan& plan);

/// n_steps applications of split_step; n_steps = 0 is the identity.
void propagate(StateVector& state, const SplitStepPlan& plan,
               std::uint64_t n_steps);

/// Normalized Gaussian wavepacket table: amplitude ~ exp(-(x-c)^2/(4 sigma^2))
/// * exp(i p x) per degree. Helper for initial-state configs.
std::vector<Complex> gaussian_wavepacket(const GridSpec& grid,
                                         std::span<const double> center,
                                         std::span<const double> sigma,
                                         std::span<const double> momentum = {});

}  // namespace fluxq
