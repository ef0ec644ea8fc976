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

#include "fluxq/pointer.hpp"
#include "fluxq/qreg.hpp"

namespace fluxq {

/// Measurement record of the sign-extraction protocol: the bare Born
/// histogram plus, for every qubit q, the histogram after a Hadamard on
/// q. Under that Hadamard, index pairs (i, k) differing in bit q report
/// |a_i + a_k|^2/2 and |a_i - a_k|^2/2, whose difference 2 a_i a_k
/// carries the relative sign. Histograms are stored as frequencies;
/// a shot count of zero marks analytically exact probabilities.
struct SignProtocolRecord {
  int qubit_count = 0;
  std::uint64_t bare_shots = 0;
  std::vector<std::uint64_t> hadamard_shots;
  std::vector<double> bare;                  // size N
  std::vector<std::vector<double>> hadamard; // [q][N]
};

/// Runs the nu+1 measurement settings against a repeatable preparation.
/// The preparation is deterministic, so each setting samples a frozen
/// copy with per-shot streams (seed, setting, shot).
SignProtocolRecord collect_sign_data(const std::function<StateVector()>& prepare,
                                     std::uint64_t shots_per_setting,
                                     std::uint64_t rng_seed);

/// Exact-probability record for a known state (oracle/test path).
SignProtocolRecord exact_sign_record(const StateVector& psi);

/// Signed amplitudes recovered from a record. Magnitudes come from the
/// bare histogram; relative signs from the Hadamard differences,
/// propagated over a maximum-significance spanning forest of the
/// hypercube; entries that cannot be reached through >= 3 sigma edges
/// from the dominant component are flagged undetermined (sign left +).
/// Leftover edges are checked for cycle consistency.
struct SignedAmplitudeTable {
  std::vector<double> a;
  std::vector<double> std_error;
  std::vector<std::uint8_t> undetermined;
  bool consistent = true;
  int conflict_edges = 0;

  int determined_count() const {
    int c = 0;
    for (auto u : undetermined) c += u == 0 ? 1 : 0;
    return c;
  }
};

SignedAmplitudeTable solve_signs(const SignProtocolRecord& record);

/// Signed amplitude estimate for one energy bin.
struct BinAmplitudeEstimate {
  std::uint64_t pointer_value = 0;
  double phase = 0.0;
  double energy = 0.0;
  double weight = 0.0;
  SignedAmplitudeTable table;
  bool low_statistics = false;
  double core_imag_defect = 0.0;  // realness diagnostic of the collapsed state
};

/// Runs the sign protocol on the post-collapse states of a spectrum
/// run. The bare setting reuses the run's per-bin position statistics;
/// each of the nu Hadamard settings performs `shots_per_setting` fresh
/// preparations whose bin arrivals follow the pointer distribution
/// (post-selection with every preparation used). Bins whose smallest
/// setting count is below `min_shots` are flagged low-statistics.
std::vector<BinAmplitudeEstimate> estimate_eigenstate_amplitudes(
    const SpectrumRun& run, std::uint64_t shots_per_setting,
    std::uint64_t rng_seed, std::uint64_t min_shots = 100,
    const SplitStepPlan* plan = nullptr);

/// Max |Im| of a state after stripping the potential half-phase
/// exp(+i V(j) dt / 2) and a global phase; ~0 for states that the sign
/// protocol can represent exactly.
double core_imag_defect(const StateVector& state, const SplitStepPlan& plan);

/// Spectral reconstruction of a propagated wavefunction from sampled
/// quantities: xi_n(0) = sum_j a_j(n) alpha_j from the signed tables and
/// the known real initial amplitudes, evolved by the measured phases,
/// then psi_j(t_steps) = sum_n xi_n(t) a_j(n).
std::vector<Complex> reconstruct_wavefunction(
    const std::vector<BinAmplitudeEstimate>& bins,
    std::span<const double> initial_real, std::uint64_t t_steps,
    std::uint64_t t_units = 1);

}  // namespace fluxq
