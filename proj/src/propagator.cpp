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

#include "fluxq/propagator.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace fluxq {

SplitStepPlan SplitStepPlan::make(GridSpec grid, PotentialSpec potential) {
  grid.validate();
  SplitStepPlan plan;
  plan.grid = std::move(grid);
  plan.potential = std::move(potential);

  const std::uint64_t total = plan.grid.total_points();
  const std::uint64_t n = plan.grid.points_per_dof();
  const std::uint64_t mask = n - 1;
  plan.v = plan.potential.evaluate_all(plan.grid);
  plan.f1.resize(total);
  plan.f2.resize(total);

  // Per-degree chirp -pi*j_k^2/n, summed over degrees.
  std::vector<double> chirp(n);
  for (std::uint64_t jk = 0; jk < n; ++jk) {
    chirp[jk] = -std::numbers::pi * static_cast<double>(jk) *
                static_cast<double>(jk) / static_cast<double>(n);
  }
  for (std::uint64_t j = 0; j < total; ++j) {
    double c = 0.0;
    std::uint64_t rest = j;
    for (int k = 0; k < plan.grid.dof; ++k) {
      c += chirp[rest & mask];
      rest >>= plan.grid.qubits_per_dof;
    }
    plan.f1[j] = c;
    plan.f2[j] = c + plan.v[j] * plan.grid.dt;
  }
  return plan;
}

void load_wavefunction(StateVector& state, std::span<const Complex> amplitudes) {
  if (amplitudes.size() != state.size()) {
    throw RangeError("wavefunction has " + std::to_string(amplitudes.size()) +
                     " amplitudes, register has " + std::to_string(state.size()));
  }
  double n2 = 0.0;
  for (const Complex& a : amplitudes) n2 += std::norm(a);
  if (n2 <= 0.0) throw ConfigError("wavefunction is the zero vector");
  std::copy(amplitudes.begin(), amplitudes.end(), state.amplitudes().begin());
  if (std::abs(n2 - 1.0) > 1e-9) {
    std::fprintf(stderr,
                 "fluxq: warning: wavefunction norm^2 = %.12g, normalizing\n",
                 n2);
    state.normalize();
  }
}

int required_qubits(double dx, double dt, double mass) {
  if (!(dx > 0.0) || !(dt > 0.0) || !(mass > 0.0)) {
    throw ConfigError("required_qubits needs positive dx, dt, mass");
  }
  const double ratio = 2.0 * std::numbers::pi * dt / (mass * dx * dx);
  const int l = static_cast<int>(std::lround(std::log2(ratio)));
  const double want = static_cast<double>(1ull << std::max(l, 0));
  if (l < 1 || std::abs(ratio - want) > 1e-9 * want) {
    const int suggested = std::max(l, 1);
    char msg[256];
    std::snprintf(msg, sizeof(msg),
                  "2*pi*dt/(mass*dx^2) = %.12g is not a power of two >= 2; "
                  "nearest consistent dt = %.17g",
                  ratio, GridSpec::consistent_dt(mass, dx, suggested));
    throw ConfigError(msg);
  }
  return l;
}

void split_step(StateVector& state, const SplitStepPlan& plan) {
  if (state.qubit_count() != plan.grid.total_qubits()) {
    throw RangeError("plan is for " + std::to_string(plan.grid.total_qubits()) +
                     " qubits, state has " + std::to_string(state.qubit_count()));
  }
  apply_diagonal_phase(state, plan.f1);
  for (int k = 0; k < plan.grid.dof; ++k) {
    qft(state, {k * plan.grid.qubits_per_dof, plan.grid.qubits_per_dof});
  }
  apply_diagonal_phase(state, plan.f2);
}

void split_step_inverse(StateVector& state, const SplitStepPlan& plan) {
  if (state.qubit_count() != plan.grid.total_qubits()) {
    throw RangeError("plan is for " + std::to_string(plan.grid.total_qubits()) +
                     " qubits, state has " + std::to_string(state.qubit_count()));
  }
  apply_diagonal_phase(state,
                       [&plan](std::uint64_t j) { return -plan.f2[j]; });
  for (int k = 0; k < plan.grid.dof; ++k) {
    inverse_qft(state, {k * plan.grid.qubits_per_dof, plan.grid.qubits_per_dof});
  }
  apply_diagonal_phase(state,
                       [&plan](std::uint64_t j) { return -plan.f1[j]; });
}

void propagate(StateVector& state, const SplitStepPlan& plan,
               std::uint64_t n_steps) {
  for (std::uint64_t s = 0; s < n_steps; ++s) split_step(state, plan);
}

std::vector<Complex> gaussian_wavepacket(const GridSpec& grid,
                                         std::span<const double> center,
                                         std::span<const double> sigma,
                                         std::span<const double> momentum) {
  if (static_cast<int>(center.size()) != grid.dof ||
      static_cast<int>(sigma.size()) != grid.dof) {
    throw ConfigError("gaussian wavepacket needs center and sigma per degree");
  }
  const std::uint64_t total = grid.total_points();
  const std::uint64_t n = grid.points_per_dof();
  const std::uint64_t mask = n - 1;
  std::vector<Complex> amps(total);
  for (std::uint64_t j = 0; j < total; ++j) {
    double log_mag = 0.0;
    double phase = 0.0;
    std::uint64_t rest = j;
    for (int k = grid.dof - 1; k >= 0; --k) {
      const double x = static_cast<double>(rest & mask) * grid.dx[k];
      rest >>= grid.qubits_per_dof;
      const double r = x - center[k];
      log_mag += -r * r / (4.0 * sigma[k] * sigma[k]);
      if (k < static_cast<int>(momentum.size())) phase += momentum[k] * x;
    }
    amps[j] = std::polar(std::exp(log_mag), phase);
  }
  double n2 = 0.0;
  for (const Complex& a : amps) n2 += std::norm(a);
  if (n2 <= 0.0) throw ConfigError("gaussian wavepacket underflowed to zero");
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& a : amps) a *= inv;
  return amps;
}

}  // namespace fluxq
