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

#include <optional>

#include "fluxq/oracle.hpp"
#include "fluxq/propagator.hpp"
#include "fluxq/qreg.hpp"

namespace fluxq {

/// K-qubit measurement dial coupled to the main register.
struct PointerConfig {
  int qubits = 8;            // K
  int x0 = 0;                // initial dial reading
  std::uint64_t t_units = 1; // base steps per unit of conditional evolution

  double phase_bin_width() const;  // 2*pi / 2^K
  void validate() const;
};

/// Main register tensored with the pointer. The pointer occupies the
/// low K bits of the joint index (joint = main * 2^K + x).
class JointState {
 public:
  JointState(const StateVector& main, const PointerConfig& cfg);

  int main_qubits() const { return main_qubits_; }
  int pointer_qubits() const { return pointer_qubits_; }
  std::uint64_t pointer_values() const { return 1ull << pointer_qubits_; }

  StateVector& state() { return state_; }
  const StateVector& state() const { return state_; }

  /// P(x) = sum_j |amp[j * 2^K + x]|^2.
  std::vector<double> pointer_marginal() const;

  /// Renormalized main-register state conditioned on pointer value x.
  /// Throws InvariantError if that outcome has (near-)zero probability.
  StateVector conditional_main(std::uint64_t x) const;

  /// Marginal probabilities |psi_j|^2 of the main register.
  std::vector<double> main_marginal() const;

 private:
  int main_qubits_;
  int pointer_qubits_;
  StateVector state_;
};

/// joint = main (x) |x0>; a pure product, no entanglement yet.
JointState attach_pointer(const StateVector& main, const PointerConfig& cfg);

/// The dial-shift coupling: Fourier transform the pointer, apply the
/// base step p * t_units times to the main register for each pointer
/// momentum p, then inverse Fourier transform the pointer. An
/// eigenvector with step eigenvalue e^{+i phi} shifts the dial to
/// x0 + t_units * phi * 2^K / (2*pi) (mod 2^K), up to bin leakage for
/// off-bin phases. Slices are independent; `workers` threads split them
/// with bit-identical results for any worker count.
void conditional_evolution(JointState& joint, const SplitStepPlan& plan,
                           const PointerConfig& cfg, int workers = 0);

struct PointerMeasurement {
  std::uint64_t outcome = 0;
  StateVector collapsed_main;
};

/// Samples the dial and collapses the main register onto the
/// renormalized conditional state; the joint state is consumed.
PointerMeasurement measure_pointer(JointState&& joint, std::uint64_t rng_seed);

/// One histogram bin of the dial, with the positions sampled from the
/// post-collapse states that landed here.
struct SpectrumBin {
  std::uint64_t pointer_value = 0;
  double phase = 0.0;   // 2*pi * ((x - x0) mod 2^K) / 2^K
  double energy = 0.0;  // phase / (dt * t_units), principal branch
  double weight = 0.0;
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> position_counts;  // size N
  bool degenerate = false;  // set in validation mode only
};

struct SpectrumEstimate {
  std::vector<SpectrumBin> bins;  // observed bins, ascending pointer value
  int pointer_qubits = 0;
  int x0 = 0;
  std::uint64_t t_units = 1;
  double dt = 0.0;
  std::uint64_t total_shots = 0;
  std::uint64_t seed = 0;

  /// Bin with the largest weight in each local cluster: a peak is a bin
  /// whose weight is >= every bin within `radius` dial steps (cyclic)
  /// and >= min_weight. Returns indices into `bins`.
  std::vector<std::size_t> peaks(double min_weight, int radius = 2) const;

  /// Sum of weights within `radius` dial steps of the given bin.
  double cluster_weight(std::size_t bin_index, int radius = 2) const;
};

/// Repeats prepare -> conditional evolution -> pointer measurement ->
/// position measurement, shot by shot (each shot draws from stream
/// (seed, shot)). The preparation is a fixed state, so the evolved
/// joint state is computed once and frozen; resampling it is
/// statistically identical to re-preparing per shot. When `validation`
/// is given, bins containing a degenerate eigenphase (or more than one
/// eigenphase) are flagged.
struct SpectrumRun {
  SpectrumEstimate estimate;
  JointState evolved;
  std::vector<double> marginal;
};

SpectrumRun run_spectrum(const StateVector& initial, const SplitStepPlan& plan,
                         const PointerConfig& cfg, std::uint64_t n_shots,
                         std::uint64_t rng_seed, int workers = 0,
                         const oracle::EigenSystem* validation = nullptr);

/// The estimate alone (spec-facing wrapper over run_spectrum).
SpectrumEstimate estimate_spectrum(const StateVector& initial,
                                   const SplitStepPlan& plan,
                                   const PointerConfig& cfg,
                                   std::uint64_t n_shots,
                                   std::uint64_t rng_seed, int workers = 0,
                                   const oracle::EigenSystem* validation = nullptr);

}  // namespace fluxq
