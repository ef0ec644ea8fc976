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

#include "fluxq/qreg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "fluxq/rng.hpp"

namespace fluxq {

double GridSpec::consistent_dt(double mass, double dx, int qubits_per_dof) {
  const double n = static_cast<double>(1ull << qubits_per_dof);
  return mass * dx * dx * n / (2.0 * std::numbers::pi);
}

void GridSpec::validate() const {
  std::ostringstream errors;
  if (dof < 1) errors << "dof must be >= 1; ";
  if (qubits_per_dof < 1) errors << "qubits_per_dof must be >= 1; ";
  if (dof >= 1 && qubits_per_dof >= 1 && total_qubits() > kMaxQubits) {
    errors << "register needs " << total_qubits() << " qubits, cap is "
           << kMaxQubits << "; ";
  }
  if (static_cast<int>(dx.size()) != dof) errors << "dx needs one entry per degree; ";
  if (static_cast<int>(mass.size()) != dof) errors << "mass needs one entry per degree; ";
  if (!(dt > 0.0)) errors << "dt must be positive; ";
  if (!errors.str().empty()) {
    throw ConfigError("invalid grid: " + errors.str());
  }
  for (int k = 0; k < dof; ++k) {
    if (!(dx[k] > 0.0)) throw ConfigError("dx must be positive");
    if (!(mass[k] > 0.0)) throw ConfigError("mass must be positive");
    const double want = consistent_dt(mass[k], dx[k], qubits_per_dof);
    if (std::abs(dt - want) > 1e-12 * want) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "grid resonance condition mass*dx^2/dt = 2*pi/2^l violated for "
          << "degree " << k << ": dt = " << dt << ", consistent dt = " << want;
      throw ConfigError(msg.str());
    }
  }
}

StateVector::StateVector(int qubit_count) : qubit_count_(qubit_count) {
  if (qubit_count < 1 || qubit_count > kMaxQubits) {
    throw ConfigError("qubit count must be in [1, " +
                      std::to_string(kMaxQubits) + "], got " +
                      std::to_string(qubit_count));
  }
  amp_.assign(1ull << qubit_count, Complex{0.0, 0.0});
  amp_[0] = Complex{1.0, 0.0};
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const Complex& a : amp_) acc += std::norm(a);
  return acc;
}

void StateVector::normalize() {
  const double n2 = norm_squared();
  if (n2 <= 0.0) throw ConfigError("cannot normalize a zero state vector");
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& a : amp_) a *= inv;
}

StateVector new_register(int qubit_count) { return StateVector(qubit_count); }

std::uint64_t grid_to_index(std::span<const int> coords, const GridSpec& spec) {
  if (static_cast<int>(coords.size()) != spec.dof) {
    throw RangeError("expected " + std::to_string(spec.dof) +
                     " coordinates, got " + std::to_string(coords.size()));
  }
  const std::uint64_t n = spec.points_per_dof();
  std::uint64_t j = 0;
  for (int k = 0; k < spec.dof; ++k) {
    if (coords[k] < 0 || static_cast<std::uint64_t>(coords[k]) >= n) {
      throw RangeError("coordinate " + std::to_string(coords[k]) +
                       " for degree " + std::to_string(k) +
                       " outside grid [0, " + std::to_string(n) + ")");
    }
    j = (j << spec.qubits_per_dof) | static_cast<std::uint64_t>(coords[k]);
  }
  return j;
}

std::vector<int> index_to_grid(std::uint64_t j, const GridSpec& spec) {
  if (j >= spec.total_points()) {
    throw RangeError("basis index " + std::to_string(j) + " outside [0, " +
                     std::to_string(spec.total_points()) + ")");
  }
  std::vector<int> coords(spec.dof);
  const std::uint64_t mask = spec.points_per_dof() - 1;
  for (int k = spec.dof - 1; k >= 0; --k) {
    coords[k] = static_cast<int>(j & mask);
    j >>= spec.qubits_per_dof;
  }
  return coords;
}

std::vector<Shot> measure_all(const StateVector& state, std::uint64_t n_shots,
                              std::uint64_t rng_seed) {
  const double n2 = state.norm_squared();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw InvariantError("measure_all requires a normalized state; |norm^2 - 1| = " +
                         std::to_string(std::abs(n2 - 1.0)));
  }
  std::vector<double> probs(state.size());
  for (std::uint64_t j = 0; j < state.size(); ++j) probs[j] = std::norm(state[j]);
  DiscreteSampler sampler(probs);

  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    Rng rng(derive_seed(rng_seed, 1, s));  // stream domain 1: measure_all
    ++counts[sampler.sample(rng)];
  }
  std::vector<Shot> shots;
  shots.reserve(counts.size());
  for (const auto& [outcome, repeat] : counts) shots.push_back({outcome, repeat});
  return shots;
}

}  // namespace fluxq
