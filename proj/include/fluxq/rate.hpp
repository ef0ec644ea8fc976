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
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fluxq/qreg.hpp"

namespace fluxq {

// Natural units: hbar = 1 everywhere. Formulas quoted in comments keep
// hbar explicit; divide energies by hbar and multiply times by hbar to
// convert.

/// 0/1 indicator h[s(j)] of the product side of a dividing surface.
struct DividingSurface {
  std::vector<std::uint8_t> h;  // one entry per basis state
  int dof_index = 0;
  double threshold = 0.0;

  /// Half-space s(q) = q_d - q_threshold; h = 1 where s >= 0.
  static DividingSurface half_space(const GridSpec& grid, int dof_index,
                                    double threshold);

  std::uint64_t product_count() const;
  std::uint64_t reactant_count() const;
};

/// Spectral data feeding the correlation function: level energies and
/// the surface-projected overlaps O_nm = sum_j a*_j(n) a_j(m) h[s(j)].
/// `overlap_variance` carries propagated sampling variances of Re(O_nm)
/// (all zero for exact sources).
struct SpectralInput {
  std::vector<double> energies;
  Eigen::MatrixXcd overlap;
  Eigen::MatrixXd overlap_variance;
  std::string source;  // "oracle" or "sampled"
};

/// Per-level reactant-side populations w_n = sum_j |a_j(n)|^2 (1 - h_j),
/// with propagated variances (zero for exact sources).
struct LevelWeights {
  std::vector<double> value;
  std::vector<double> variance;
};

/// One point of the flux-flux correlation function.
struct CfPoint {
  double t = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

/// Running-integral values at 0.5, 0.75 and 1.0 of t_max and their
/// relative spread.
struct PlateauDiagnostics {
  double at_half = 0.0;
  double at_three_quarters = 0.0;
  double at_full = 0.0;
  double relative_spread = 0.0;
  bool converged = false;
};

struct RateParams {
  double beta = 1.0;
  double t_max = 10.0;
  int t_points = 100;             // reporting grid for the C_f series
  double quadrature_step = 0.0;   // trapezoid step; <= 0 picks t_max/2000
  double boltzmann_cutoff = 1e-8; // relative retention threshold eps_B
  double plateau_bound = 0.05;    // relative spread above which we warn
  std::optional<double> q_r_override;  // fixed external Q_r, if configured
};

struct RateResult {
  double beta = 0.0;
  std::vector<CfPoint> cf;
  double q_r = 0.0;
  double k = 0.0;
  double k_std_error = 0.0;
  double t_max = 0.0;
  PlateauDiagnostics plateau;
  std::string source;
  std::uint64_t shots = 0;
  int retained_levels = 0;
  // tau = t - i*hbar*beta/2 is the complex time entering the thermal
  // propagators; recorded as the pair (t_max, -beta/2) for the manifest.
};

/// <n|F|m> = (i/hbar) (E_n - E_m) O_nm.
std::complex<double> flux_matrix_element(double e_n, double e_m,
                                         std::complex<double> o_nm);

/// Builds O_nm and its variances from signed amplitude columns
/// (amplitudes is N x L; column n holds a_j(n)).
SpectralInput make_spectral_input(std::span<const double> energies,
                                  const Eigen::MatrixXd& amplitudes,
                                  const Eigen::MatrixXd& amplitude_variance,
                                  const DividingSurface& surface,
                                  std::string source);

/// w_n = sum_j a_j(n)^2 (1 - h_j) with propagated variances.
LevelWeights reactant_weights(const Eigen::MatrixXd& amplitudes,
                              const Eigen::MatrixXd& amplitude_variance,
                              const DividingSurface& surface);

/// C_f(t) = (1/hbar^2) sum_{n != m} exp(-beta(E_n+E_m)/2)
///          * exp(i(E_m-E_n)t/hbar) (E_n-E_m)^2 |O_nm|^2,
/// evaluated over levels whose relative Boltzmann factor
/// exp(-beta(E_n - E_min)/2) is at least `boltzmann_cutoff`. Real and
/// even in t by the (n,m)/(m,n) pairing. Throws InvariantError on an
/// empty spectrum.
std::vector<CfPoint> correlation_function(const SpectralInput& spec,
                                          double beta,
                                          std::span<const double> t_grid,
                                          double boltzmann_cutoff);

/// Q_r = sum_n exp(-beta E_n) w_n. Throws ConfigError unless beta > 0.
double partition_function(std::span<const double> energies,
                          std::span<const double> reactant_weights,
                          double beta);

/// k(T) = Q_r^{-1} * integral_0^{t_max} C_f(t) dt via trapezoids, with
/// plateau diagnostics at 0.5/0.75/1.0 t_max. A non-converged plateau
/// is reported in the result (and by the caller), never silently.
RateResult rate_constant(const SpectralInput& spec,
                         const LevelWeights& reactant,
                         const RateParams& params);

}  // namespace fluxq
