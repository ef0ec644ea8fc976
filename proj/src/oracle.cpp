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

#include "fluxq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fluxq::oracle {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void check_dense_cap(int qubits) {
  if (qubits > kDenseCapQubits) {
    throw ResourceError("dense oracle capped at " +
                        std::to_string(kDenseCapQubits) + " qubits, requested " +
                        std::to_string(qubits));
  }
}

/// Joint diagonalization of commuting real-symmetric X, Y (the real and
/// imaginary parts of a complex-symmetric unitary): diagonalize X, then
/// rotate inside each near-degenerate X-cluster to diagonalize Y there.
/// Returns real orthonormal vectors; phases via Rayleigh quotients.
void joint_diagonalize(const MatrixXd& x, const MatrixXd& y, MatrixXd& vectors,
                       VectorXd& phases) {
  const Eigen::Index n = x.rows();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(x);
  vectors = es.eigenvectors();
  const VectorXd xv = es.eigenvalues();

  constexpr double cluster_tol = 1e-8;
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i + 1;
    while (j < n && xv[j] - xv[i] < cluster_tol) ++j;
    if (j - i > 1) {
      const auto block = vectors.middleCols(i, j - i);
      const MatrixXd yb = block.transpose() * y * block;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es_y(yb);
      vectors.middleCols(i, j - i) = block * es_y.eigenvectors();
    }
    i = j;
  }

  phases.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto v = vectors.col(c);
    const double xr = v.dot(x * v);
    const double yr = v.dot(y * v);
    double phi = std::atan2(yr, xr);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    phases[c] = phi;
  }
}

void sort_and_sign_fix(VectorXd& phases, MatrixXd& cores) {
  const Eigen::Index n = phases.size();
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return phases[a] < phases[b]; });
  VectorXd p2(n);
  MatrixXd c2(cores.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p2[i] = phases[order[i]];
    c2.col(i) = cores.col(order[i]);
    Eigen::Index argmax = 0;
    c2.col(i).cwiseAbs().maxCoeff(&argmax);
    if (c2(argmax, i) < 0.0) c2.col(i) = -c2.col(i);
  }
  phases = p2;
  cores = c2;
}

std::vector<int> cluster_multiplicities(const VectorXd& phases, double tol) {
  const Eigen::Index n = phases.size();
  std::vector<int> mult(n, 1);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i + 1;
    while (j < n && phases[j] - phases[i] < tol) ++j;
    // wraparound: phases near 2*pi cluster with phases near 0
    for (Eigen::Index k = i; k < j; ++k) mult[k] = static_cast<int>(j - i);
    i = j;
  }
  if (n > 1) {
    const double wrap = phases[0] + 2.0 * std::numbers::pi - phases[n - 1];
    if (wrap < tol) {
      // merge first and last clusters
      Eigen::Index lo = 0;
      while (lo + 1 < n && phases[lo + 1] - phases[0] < tol) ++lo;
      Eigen::Index hi = n - 1;
      while (hi > 0 && phases[n - 1] - phases[hi - 1] < tol) --hi;
      const int m = static_cast<int>((lo + 1) + (n - hi));
      for (Eigen::Index k = 0; k <= lo; ++k) mult[k] = m;
      for (Eigen::Index k = hi; k < n; ++k) mult[k] = m;
    }
  }
  return mult;
}

double max_residual_of(const MatrixXcd& u, const MatrixXcd& vectors,
                       const VectorXd& phases) {
  double worst = 0.0;
  for (Eigen::Index n = 0; n < vectors.cols(); ++n) {
    const Eigen::VectorXcd r =
        u * vectors.col(n) -
        std::polar(1.0, phases[n]) * vectors.col(n);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

}  // namespace

Eigen::MatrixXcd dft_matrix(std::uint64_t n) {
  MatrixXcd f(n, n);
  const double inv = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t j = 0; j < n; ++j) {
    for (std::uint64_t jp = 0; jp < n; ++jp) {
      const double angle = 2.0 * std::numbers::pi *
                           static_cast<double>((j * jp) % n) /
                           static_cast<double>(n);
      f(jp, j) = std::polar(inv, angle);
    }
  }
  return f;
}

double unitarity_defect(const MatrixXcd& u) {
  const MatrixXcd d = u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd dense_step_unitary(const SplitStepPlan& plan) {
  check_dense_cap(plan.grid.total_qubits());
  const std::uint64_t total = plan.grid.total_points();
  const std::uint64_t n = plan.grid.points_per_dof();

  MatrixXcd kernel = dft_matrix(n);
  MatrixXcd blocks = kernel;
  for (int k = 1; k < plan.grid.dof; ++k) {
    MatrixXcd next(blocks.rows() * kernel.rows(), blocks.cols() * kernel.cols());
    for (Eigen::Index r = 0; r < blocks.rows(); ++r) {
      for (Eigen::Index c = 0; c < blocks.cols(); ++c) {
        next.block(r * kernel.rows(), c * kernel.cols(), kernel.rows(),
                   kernel.cols()) = blocks(r, c) * kernel;
      }
    }
    blocks = std::move(next);
  }

  MatrixXcd u(total, total);
  for (std::uint64_t r = 0; r < total; ++r) {
    const Complex left = std::polar(1.0, plan.f2[r]);
    for (std::uint64_t c = 0; c < total; ++c) {
      u(r, c) = left * blocks(r, c) * std::polar(1.0, plan.f1[c]);
    }
  }
  return u;
}

Eigen::MatrixXcd inverse_step(const SplitStepPlan& plan) {
  return dense_step_unitary(plan).adjoint();
}

EigenSystem eigensystem(const MatrixXcd& u) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    throw RangeError("eigensystem needs a square matrix");
  }
  if (unitarity_defect(u) > 1e-10) {
    throw InvariantError("eigensystem input is not unitary to 1e-10");
  }
  EigenSystem out;
  const double asym = (u - u.transpose()).cwiseAbs().maxCoeff();
  if (asym < 1e-12) {
    MatrixXd cores;
    VectorXd phases;
    joint_diagonalize(u.real(), u.imag(), cores, phases);
    sort_and_sign_fix(phases, cores);
    out.phases = phases;
    out.real_cores = cores;
    out.vectors = cores.cast<Complex>();
    out.cores_are_real = true;
  } else {
    Eigen::ComplexSchur<MatrixXcd> schur(u);
    const Eigen::Index n = u.rows();
    VectorXd phases(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double phi = std::arg(schur.matrixT()(i, i));
      if (phi < 0.0) phi += 2.0 * std::numbers::pi;
      phases[i] = phi;
    }
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return phases[a] < phases[b];
    });
    out.phases.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.phases[i] = phases[order[i]];
      out.vectors.col(i) = schur.matrixU().col(order[i]);
    }
    // realification attempt: v = e^{i theta} r  =>  v^T v = e^{2 i theta}
    MatrixXd cores(n, n);
    bool ok = true;
    for (Eigen::Index i = 0; i < n && ok; ++i) {
      const Complex z = (out.vectors.col(i).transpose() * out.vectors.col(i))(0);
      if (std::abs(std::abs(z) - 1.0) > 1e-9) {
        ok = false;
        break;
      }
      const Eigen::VectorXcd r =
          std::polar(1.0, -0.5 * std::arg(z)) * out.vectors.col(i);
      if (r.imag().cwiseAbs().maxCoeff() > 1e-9) {
        ok = false;
        break;
      }
      cores.col(i) = r.real();
    }
    if (ok) {
      out.real_cores = cores;
      sort_and_sign_fix(out.phases, out.real_cores);
      out.vectors = out.real_cores.cast<Complex>();
    }
    out.cores_are_real = ok;
  }
  out.multiplicity = cluster_multiplicities(out.phases, 1e-9);
  out.max_residual = max_residual_of(u, out.vectors, out.phases);
  return out;
}

EigenSystem step_eigensystem(const SplitStepPlan& plan) {
  check_dense_cap(plan.grid.total_qubits());
  const std::uint64_t total = plan.grid.total_points();

  // U = D(V dt) S0 with S0 = D(chirp) F D(chirp) complex symmetric, so
  // M = D(e^{i V dt/2}) S0 D(e^{i V dt/2}) is symmetric and similar to U
  // via the unitary diagonal D(e^{i V dt/2}). M's eigenvectors are real.
  SplitStepPlan free_plan = plan;
  free_plan.potential = PotentialSpec::free_particle();
  free_plan.f2 = free_plan.f1;
  std::fill(free_plan.v.begin(), free_plan.v.end(), 0.0);
  const MatrixXcd s0 = dense_step_unitary(free_plan);

  Eigen::VectorXcd half(total);
  for (std::uint64_t j = 0; j < total; ++j) {
    half[j] = std::polar(1.0, 0.5 * plan.v[j] * plan.grid.dt);
  }
  MatrixXcd m = half.asDiagonal() * s0 * half.asDiagonal();

  EigenSystem out;
  MatrixXd cores;
  VectorXd phases;
  joint_diagonalize(m.real(), m.imag(), cores, phases);
  sort_and_sign_fix(phases, cores);
  out.phases = phases;
  out.real_cores = cores;
  out.cores_are_real = true;
  out.vectors.resize(total, total);
  for (std::uint64_t j = 0; j < total; ++j) {
    out.vectors.row(j) = half[j] * cores.row(j);
  }
  out.multiplicity = cluster_multiplicities(out.phases, 1e-9);
  out.max_residual =
      max_residual_of(dense_step_unitary(plan), out.vectors, out.phases);
  return out;
}

Eigen::VectorXd populations(const EigenSystem& eig, std::span<const Complex> psi) {
  if (static_cast<Eigen::Index>(psi.size()) != eig.vectors.rows()) {
    throw RangeError("state size does not match eigenvectors");
  }
  const Eigen::Map<const Eigen::VectorXcd> v(psi.data(), psi.size());
  VectorXd pops(eig.vectors.cols());
  for (Eigen::Index n = 0; n < eig.vectors.cols(); ++n) {
    pops[n] = std::norm(eig.vectors.col(n).dot(v));
  }
  return pops;
}

SpectralInput spectral_input(const EigenSystem& eig, double dt,
                             const DividingSurface& surface) {
  if (!eig.cores_are_real) {
    throw InvariantError("spectral input needs real eigenvector cores");
  }
  std::vector<double> energies(eig.phases.size());
  for (Eigen::Index n = 0; n < eig.phases.size(); ++n) {
    energies[n] = eig.phases[n] / dt;
  }
  return make_spectral_input(energies, eig.real_cores, Eigen::MatrixXd(),
                             surface, "oracle");
}

LevelWeights level_weights(const EigenSystem& eig,
                           const DividingSurface& surface) {
  if (!eig.cores_are_real) {
    throw InvariantError("level weights need real eigenvector cores");
  }
  return reactant_weights(eig.real_cores, Eigen::MatrixXd(), surface);
}

std::vector<CfPoint> trace_correlation(const SplitStepPlan& plan,
                                       const DividingSurface& surface,
                                       double beta,
                                       std::span<const double> t_grid) {
  const EigenSystem eig = step_eigensystem(plan);
  const Eigen::Index n = eig.phases.size();
  if (static_cast<Eigen::Index>(surface.h.size()) != n) {
    throw RangeError("surface size does not match the plan");
  }

  // Position-basis flux operator F = i [H_eff, diag(h)] with
  // H_eff = V diag(E) V^dagger; then G = V^dagger F V so that
  // Tr[F e^{iH tau*} F e^{-iH tau}] = sum_{nm} G_nm G_mn
  //   e^{i E_m tau*} e^{-i E_n tau},  tau = t - i beta/2.
  VectorXd energies(n);
  for (Eigen::Index i = 0; i < n; ++i) energies[i] = eig.phases[i] / plan.grid.dt;
  const MatrixXcd& vec = eig.vectors;
  const MatrixXcd h_eff =
      vec * energies.asDiagonal().toDenseMatrix().cast<Complex>() * vec.adjoint();
  Eigen::VectorXcd hdiag(n);
  for (Eigen::Index j = 0; j < n; ++j) hdiag[j] = surface.h[j] ? 1.0 : 0.0;
  const MatrixXcd f = Complex{0.0, 1.0} *
                      (h_eff * hdiag.asDiagonal().toDenseMatrix() -
                       hdiag.asDiagonal().toDenseMatrix() * h_eff);
  const MatrixXcd g = vec.adjoint() * f * vec;

  std::vector<CfPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    Complex acc = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        // e^{i E_b tau*} e^{-i E_a tau} with tau = t - i beta/2
        const double damp = std::exp(-0.5 * beta * (energies[a] + energies[b]));
        acc += g(a, b) * g(b, a) *
               std::polar(damp, (energies[b] - energies[a]) * t);
      }
    }
    out.push_back({t, acc.real(), 0.0});
  }
  return out;
}

RateResult direct_correlation_and_rate(const SplitStepPlan& plan,
                                       const DividingSurface& surface,
                                       const RateParams& params,
                                       double self_check_tol) {
  check_dense_cap(plan.grid.total_qubits());
  const EigenSystem eig = step_eigensystem(plan);
  const SpectralInput spec = spectral_input(eig, plan.grid.dt, surface);
  const LevelWeights weights = level_weights(eig, surface);

  std::vector<double> t_grid(params.t_points);
  for (int i = 0; i < params.t_points; ++i) {
    t_grid[i] = params.t_max * static_cast<double>(i) /
                static_cast<double>(std::max(params.t_points - 1, 1));
  }
  const auto trace_cf = trace_correlation(plan, surface, params.beta, t_grid);
  const auto eigensum_cf =
      correlation_function(spec, params.beta, t_grid, 0.0);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (std::abs(trace_cf[i].value - eigensum_cf[i].value) > self_check_tol) {
      throw InvariantError(
          "trace-form and eigen-sum correlation functions disagree at t = " +
          std::to_string(t_grid[i]));
    }
  }

  RateResult result = rate_constant(spec, weights, params);
  result.source = "oracle";
  return result;
}

}  // namespace fluxq::oracle
