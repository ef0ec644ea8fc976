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

#include "fluxq/rate.hpp"

#include <algorithm>
#include <cmath>

namespace fluxq {

namespace {

/// Indices of levels passing the relative Boltzmann cutoff.
std::vector<int> retained_levels(std::span<const double> energies, double beta,
                                 double cutoff) {
  if (energies.empty()) {
    throw InvariantError("correlation function needs a nonempty spectrum");
  }
  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<int> keep;
  for (int n = 0; n < static_cast<int>(energies.size()); ++n) {
    if (std::exp(-0.5 * beta * (energies[n] - e_min)) >= cutoff) {
      keep.push_back(n);
    }
  }
  if (keep.empty()) {
    throw InvariantError("Boltzmann cutoff removed every level");
  }
  return keep;
}

struct PairTerm {
  double delta_e = 0.0;   // E_m - E_n with n < m
  double coeff = 0.0;     // 2 * exp(-beta(E_n+E_m)/2) * (E_n-E_m)^2 * |O_nm|^2
  double coeff_var = 0.0; // variance of coeff from var(Re O_nm)
};

/// Precomputes the (n < m) pair terms: C_f(t) = sum coeff * cos(delta_e * t).
std::vector<PairTerm> pair_terms(const SpectralInput& spec, double beta,
                                 double cutoff) {
  const auto keep = retained_levels(spec.energies, beta, cutoff);
  const bool have_var = spec.overlap_variance.size() > 0;
  std::vector<PairTerm> terms;
  terms.reserve(keep.size() * (keep.size() - 1) / 2);
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = a + 1; b < keep.size(); ++b) {
      const int n = keep[a];
      const int m = keep[b];
      const double de = spec.energies[m] - spec.energies[n];
      const std::complex<double> o = spec.overlap(n, m);
      const double boltz = std::exp(-0.5 * beta * (spec.energies[n] + spec.energies[m]));
      PairTerm term;
      term.delta_e = de;
      term.coeff = 2.0 * boltz * de * de * std::norm(o);
      if (have_var) {
        // d|O|^2 = 2 Re(O) dRe(O) for the real-amplitude pipeline.
        const double dvar = 4.0 * o.real() * o.real() * spec.overlap_variance(n, m);
        const double f = 2.0 * boltz * de * de;
        term.coeff_var = f * f * dvar;
      }
      terms.push_back(term);
    }
  }
  return terms;
}

}  // namespace

DividingSurface DividingSurface::half_space(const GridSpec& grid,
                                            int dof_index, double threshold) {
  if (dof_index < 0 || dof_index >= grid.dof) {
    throw ConfigError("dividing surface degree " + std::to_string(dof_index) +
                      " outside [0, " + std::to_string(grid.dof) + ")");
  }
  DividingSurface s;
  s.dof_index = dof_index;
  s.threshold = threshold;
  s.h.resize(grid.total_points());
  for (std::uint64_t j = 0; j < s.h.size(); ++j) {
    const auto coords = index_to_grid(j, grid);
    const double x = coords[dof_index] * grid.dx[dof_index];
    s.h[j] = x - threshold >= 0.0 ? 1 : 0;
  }
  return s;
}

std::uint64_t DividingSurface::product_count() const {
  std::uint64_t c = 0;
  for (auto v : h) c += v;
  return c;
}

std::uint64_t DividingSurface::reactant_count() const {
  return h.size() - product_count();
}

std::complex<double> flux_matrix_element(double e_n, double e_m,
                                         std::complex<double> o_nm) {
  if (!std::isfinite(e_n) || !std::isfinite(e_m) || !std::isfinite(o_nm.real()) ||
      !std::isfinite(o_nm.imag())) {
    throw NumericError("flux matrix element inputs must be finite");
  }
  return std::complex<double>{0.0, 1.0} * (e_n - e_m) * o_nm;
}

SpectralInput make_spectral_input(std::span<const double> energies,
                                  const Eigen::MatrixXd& amplitudes,
                                  const Eigen::MatrixXd& amplitude_variance,
                                  const DividingSurface& surface,
                                  std::string source) {
  const int levels = static_cast<int>(energies.size());
  if (amplitudes.cols() != levels ||
      amplitudes.rows() != static_cast<Eigen::Index>(surface.h.size())) {
    throw RangeError("amplitude matrix shape does not match energies/surface");
  }
  SpectralInput spec;
  spec.energies.assign(energies.begin(), energies.end());
  spec.source = std::move(source);
  spec.overlap.resize(levels, levels);
  spec.overlap_variance = Eigen::MatrixXd::Zero(levels, levels);
  const bool have_var = amplitude_variance.size() > 0;
  for (int n = 0; n < levels; ++n) {
    for (int m = n; m < levels; ++m) {
      double o = 0.0;
      double var = 0.0;
      for (Eigen::Index j = 0; j < amplitudes.rows(); ++j) {
        if (!surface.h[j]) continue;
        o += amplitudes(j, n) * amplitudes(j, m);
        if (have_var) {
          var += amplitudes(j, m) * amplitudes(j, m) * amplitude_variance(j, n) +
                 amplitudes(j, n) * amplitudes(j, n) * amplitude_variance(j, m);
        }
      }
      spec.overlap(n, m) = o;
      spec.overlap(m, n) = o;
      spec.overlap_variance(n, m) = var;
      spec.overlap_variance(m, n) = var;
    }
  }
  return spec;
}

LevelWeights reactant_weights(const Eigen::MatrixXd& amplitudes,
                              const Eigen::MatrixXd& amplitude_variance,
                              const DividingSurface& surface) {
  LevelWeights w;
  const bool have_var = amplitude_variance.size() > 0;
  w.value.resize(amplitudes.cols());
  w.variance.assign(amplitudes.cols(), 0.0);
  for (Eigen::Index n = 0; n < amplitudes.cols(); ++n) {
    double acc = 0.0;
    double var = 0.0;
    for (Eigen::Index j = 0; j < amplitudes.rows(); ++j) {
      if (surface.h[j]) continue;
      const double a = amplitudes(j, n);
      acc += a * a;
      if (have_var) var += 4.0 * a * a * amplitude_variance(j, n);
    }
    w.value[n] = acc;
    w.variance[n] = var;
  }
  return w;
}

std::vector<CfPoint> correlation_function(const SpectralInput& spec,
                                          double beta,
                                          std::span<const double> t_grid,
                                          double boltzmann_cutoff) {
  const auto terms = pair_terms(spec, beta, boltzmann_cutoff);
  std::vector<CfPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    double c = 0.0;
    double var = 0.0;
    for (const PairTerm& term : terms) {
      const double cosv = std::cos(term.delta_e * t);
      c += term.coeff * cosv;
      var += term.coeff_var * cosv * cosv;
    }
    out.push_back({t, c, std::sqrt(var)});
  }
  return out;
}

double partition_function(std::span<const double> energies,
                          std::span<const double> reactant_weights,
                          double beta) {
  if (!(beta > 0.0)) throw ConfigError("partition function needs beta > 0");
  if (energies.size() != reactant_weights.size()) {
    throw RangeError("energies and reactant weights must align");
  }
  double q = 0.0;
  for (std::size_t n = 0; n < energies.size(); ++n) {
    q += std::exp(-beta * energies[n]) * reactant_weights[n];
  }
  return q;
}

RateResult rate_constant(const SpectralInput& spec, const LevelWeights& reactant,
                         const RateParams& params) {
  if (!(params.t_max > 0.0)) throw ConfigError("t_max must be positive");
  RateResult result;
  result.beta = params.beta;
  result.t_max = params.t_max;
  result.source = spec.source;

  const auto terms = pair_terms(spec, params.beta, params.boltzmann_cutoff);
  result.retained_levels = static_cast<int>(
      retained_levels(spec.energies, params.beta, params.boltzmann_cutoff).size());

  double q_r;
  double q_var = 0.0;
  if (params.q_r_override) {
    q_r = *params.q_r_override;
    if (!(q_r > 0.0)) throw ConfigError("configured Q_r must be positive");
  } else {
    q_r = partition_function(spec.energies, reactant.value, params.beta);
    for (std::size_t n = 0; n < reactant.variance.size(); ++n) {
      const double f = std::exp(-params.beta * spec.energies[n]);
      q_var += f * f * reactant.variance[n];
    }
    if (!(q_r > 0.0)) {
      throw InvariantError("reactant partition function vanished; check the "
                           "dividing surface");
    }
  }
  result.q_r = q_r;

  // Trapezoid rule on a uniform fine grid. For each pair term the
  // accumulated weight g = sum_i w_i cos(dE t_i) also gives the exact
  // sensitivity of the integral to that term's coefficient, which is
  // what the error propagation needs.
  const double h = params.quadrature_step > 0.0 ? params.quadrature_step
                                                : params.t_max / 2000.0;
  const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(params.t_max / h));
  const double step = params.t_max / static_cast<double>(steps);
  std::vector<double> g(terms.size(), 0.0);
  double integral = 0.0;
  double at_half = 0.0, at_3q = 0.0;
  const std::uint64_t i_half = steps / 2;
  const std::uint64_t i_3q = (3 * steps) / 4;
  double prev = 0.0;
  for (const PairTerm& term : terms) prev += term.coeff;  // C_f(0)
  std::vector<double> g_prev(terms.size());
  for (std::size_t p = 0; p < terms.size(); ++p) g_prev[p] = 1.0;
  for (std::uint64_t i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) * step;
    double c = 0.0;
    for (std::size_t p = 0; p < terms.size(); ++p) {
      const double cosv = std::cos(terms[p].delta_e * t);
      c += terms[p].coeff * cosv;
      g[p] += 0.5 * step * (g_prev[p] + cosv);
      g_prev[p] = cosv;
    }
    integral += 0.5 * step * (prev + c);
    prev = c;
    if (i == i_half) at_half = integral;
    if (i == i_3q) at_3q = integral;
  }

  result.k = integral / q_r;
  result.plateau.at_half = at_half / q_r;
  result.plateau.at_three_quarters = at_3q / q_r;
  result.plateau.at_full = result.k;
  const double lo = std::min({result.plateau.at_half,
                              result.plateau.at_three_quarters, result.k});
  const double hi = std::max({result.plateau.at_half,
                              result.plateau.at_three_quarters, result.k});
  const double scale = std::max(std::abs(result.k), 1e-300);
  result.plateau.relative_spread = (hi - lo) / scale;
  result.plateau.converged = result.plateau.relative_spread <= params.plateau_bound;

  double var_integral = 0.0;
  for (std::size_t p = 0; p < terms.size(); ++p) {
    var_integral += g[p] * g[p] * terms[p].coeff_var;
  }
  const double rel_var = var_integral / (integral * integral + 1e-300) +
                         q_var / (q_r * q_r);
  result.k_std_error = std::abs(result.k) * std::sqrt(std::max(rel_var, 0.0));

  std::vector<double> t_grid(params.t_points);
  for (int i = 0; i < params.t_points; ++i) {
    t_grid[i] = params.t_max * static_cast<double>(i) /
                static_cast<double>(std::max(params.t_points - 1, 1));
  }
  result.cf = correlation_function(spec, params.beta, t_grid,
                                   params.boltzmann_cutoff);
  return result;
}

}  // namespace fluxq
