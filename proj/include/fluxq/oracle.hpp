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

#include "fluxq/propagator.hpp"
#include "fluxq/rate.hpp"

namespace fluxq::oracle {

/// Dense ground truth tops out at 2^12 basis states.
inline constexpr int kDenseCapQubits = 12;

/// DFT with entry (j', j) = exp(+2*pi*i*j*j'/n) / sqrt(n).
Eigen::MatrixXcd dft_matrix(std::uint64_t n);

/// max |(U^dagger U - I)_ij|.
double unitarity_defect(const Eigen::MatrixXcd& u);

/// Explicit product D(F2) * (per-degree DFT) * D(F1) on the full grid.
Eigen::MatrixXcd dense_step_unitary(const SplitStepPlan& plan);

/// Conjugate transpose of dense_step_unitary.
Eigen::MatrixXcd inverse_step(const SplitStepPlan& plan);

/// Exact spectral decomposition of a step unitary.
///
/// Eigenvalues are written e^{+i phi_n}, phi_n in [0, 2*pi), sorted
/// ascending; E_n = phi_n / dt on that principal branch. For a step
/// generated by a real potential the eigenvectors factor as
/// exp(+i V(j) dt / 2) times a real vector; `real_cores` holds those
/// real factors (orthonormal, sign-fixed so the largest-magnitude
/// component is positive). Diagonal-operator matrix elements such as
/// O_nm and reactant weights are identical whether computed from the
/// full eigenvectors or the cores, because the local phases cancel.
struct EigenSystem {
  Eigen::VectorXd phases;
  Eigen::MatrixXcd vectors;
  Eigen::MatrixXd real_cores;      // empty when no real factorization exists
  std::vector<int> multiplicity;   // cluster size per eigenvalue (tol 1e-9)
  double max_residual = 0.0;       // max_n ||U v_n - e^{i phi_n} v_n||_2
  bool cores_are_real = false;
};

/// Decomposition of a generic unitary: a complex-symmetric U gets the
/// exact real-eigenvector route, anything else goes through a Schur
/// decomposition with a realification attempt. Throws InvariantError if
/// U is not unitary to 1e-10.
EigenSystem eigensystem(const Eigen::MatrixXcd& u);

/// Decomposition of the split-step unitary via the potential
/// half-phase similarity; exact real cores for any real potential.
EigenSystem step_eigensystem(const SplitStepPlan& plan);

/// Populations |<v_n|psi>|^2 for every eigenvector.
Eigen::VectorXd populations(const EigenSystem& eig,
                            std::span<const Complex> psi);

/// SpectralInput (energies E_n = phi_n/dt, overlaps from the cores).
SpectralInput spectral_input(const EigenSystem& eig, double dt,
                             const DividingSurface& surface);

/// Reactant-side weights from the cores.
LevelWeights level_weights(const EigenSystem& eig,
                           const DividingSurface& surface);

/// C_f(t) by the dense trace Tr[F e^{iH tau*} F e^{-iH tau}] with
/// H = sum_n E_n |n><n| and F = i[H, diag(h)] built in the position
/// basis; cross-checked against the eigen-sum form to `self_check_tol`
/// (InvariantError on disagreement), then integrated to a RateResult.
RateResult direct_correlation_and_rate(const SplitStepPlan& plan,
                                       const DividingSurface& surface,
                                       const RateParams& params,
                                       double self_check_tol = 1e-8);

/// The dense-trace C_f series alone (untruncated spectrum).
std::vector<CfPoint> trace_correlation(const SplitStepPlan& plan,
                                       const DividingSurface& surface,
                                       double beta,
                                       std::span<const double> t_grid);

}  // namespace fluxq::oracle
