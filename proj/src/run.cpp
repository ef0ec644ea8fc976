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

#include "fluxq/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fluxq/amplitudes.hpp"
#include "fluxq/oracle.hpp"
#include "fluxq/pointer.hpp"
#include "fluxq/propagator.hpp"
#include "fluxq/rate.hpp"

namespace fluxq {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

struct RunContext {
  const RunConfig& cfg;
  fs::path out;
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;

  void add(const std::string& name) { artifacts.push_back(name); }
  void warn(const std::string& message) {
    warnings.push_back(message);
    std::fprintf(stderr, "fluxq: warning: %s\n", message.c_str());
  }
};

json spectrum_to_json(const SpectrumEstimate& est) {
  json bins = json::array();
  for (const auto& b : est.bins) {
    bins.push_back({{"bin", b.pointer_value},
                    {"phase", b.phase},
                    {"energy", b.energy},
                    {"weight", b.weight},
                    {"shots", b.shots},
                    {"degenerate", b.degenerate}});
  }
  return json{{"bins", bins},
              {"pointer_qubits", est.pointer_qubits},
              {"x0", est.x0},
              {"t_units", est.t_units},
              {"dt", est.dt},
              {"total_shots", est.total_shots},
              {"seed", est.seed}};
}

void write_histogram_csv(RunContext& ctx, const SpectrumEstimate& est) {
  std::string csv = "bin,phase,energy,weight,shots\n";
  for (const auto& b : est.bins) {
    csv += std::to_string(b.pointer_value) + "," + g17(b.phase) + "," +
           g17(b.energy) + "," + g17(b.weight) + "," + std::to_string(b.shots) +
           "\n";
  }
  write_text(ctx.out / "histogram.csv", csv);
  ctx.add("histogram.csv");
}

void write_cf_csv(RunContext& ctx, const std::vector<CfPoint>& cf) {
  std::string csv = "t,C_f,stderr\n";
  for (const auto& p : cf) {
    csv += g17(p.t) + "," + g17(p.value) + "," + g17(p.std_error) + "\n";
  }
  write_text(ctx.out / "cf.csv", csv);
  ctx.add("cf.csv");
}

json rate_to_json(const RateResult& r) {
  return json{{"beta", r.beta},
              {"q_r", r.q_r},
              {"k", r.k},
              {"k_stderr", r.k_std_error},
              {"t_max", r.t_max},
              {"tau_imag", -0.5 * r.beta},
              {"retained_levels", r.retained_levels},
              {"source", r.source},
              {"shots", r.shots},
              {"plateau",
               {{"at_half", r.plateau.at_half},
                {"at_three_quarters", r.plateau.at_three_quarters},
                {"at_full", r.plateau.at_full},
                {"relative_spread", r.plateau.relative_spread},
                {"converged", r.plateau.converged}}}};
}

/// Sampled-pipeline spectral data from retained peak bins.
struct SampledSpectral {
  SpectralInput input;
  LevelWeights weights;
  std::vector<std::size_t> retained;  // indices into the bin estimates
};

SampledSpectral assemble_spectral(RunContext& ctx, const SpectrumRun& spec_run,
                                  const std::vector<BinAmplitudeEstimate>& amps,
                                  const DividingSurface& surface) {
  const auto peak_idx = spec_run.estimate.peaks(ctx.cfg.min_bin_weight);
  SampledSpectral out;
  std::vector<double> energies;
  std::vector<const SignedAmplitudeTable*> tables;
  for (std::size_t i : peak_idx) {
    const auto& bin = spec_run.estimate.bins[i];
    const BinAmplitudeEstimate* est = nullptr;
    for (const auto& a : amps) {
      if (a.pointer_value == bin.pointer_value) {
        est = &a;
        break;
      }
    }
    if (!est || est->low_statistics) {
      ctx.warn("peak bin " + std::to_string(bin.pointer_value) +
               " dropped: too few shots for amplitude estimation");
      continue;
    }
    if (!est->table.consistent) {
      ctx.warn("peak bin " + std::to_string(bin.pointer_value) +
               " has inconsistent sign equations (" +
               std::to_string(est->table.conflict_edges) +
               " conflicting hypercube edges); keeping tree solution");
    }
    energies.push_back(bin.energy);
    tables.push_back(&est->table);
    out.retained.push_back(i);
  }
  if (energies.empty()) {
    throw InvariantError("no spectrum peak passed the weight and statistics "
                         "thresholds; increase shots or lower min_bin_weight");
  }
  const std::uint64_t n = tables.front()->a.size();
  Eigen::MatrixXd a(n, energies.size());
  Eigen::MatrixXd var(n, energies.size());
  for (std::size_t c = 0; c < tables.size(); ++c) {
    for (std::uint64_t j = 0; j < n; ++j) {
      a(j, c) = tables[c]->a[j];
      const double se = tables[c]->std_error[j];
      // Undetermined signs carry their full magnitude as uncertainty.
      var(j, c) = tables[c]->undetermined[j]
                      ? a(j, c) * a(j, c) + se * se
                      : se * se;
    }
  }
  out.input = make_spectral_input(energies, a, var, surface, "sampled");
  out.weights = reactant_weights(a, var, surface);
  return out;
}

void write_manifest(RunContext& ctx, const ValidatedConfig& validated,
                    double wall_seconds) {
  json manifest;
  manifest["mode"] = ctx.cfg.mode;
  manifest["config"] = validated.echo;
  manifest["seed"] = ctx.cfg.seed;
  manifest["version"] = FLUXQ_VERSION;
  manifest["artifacts"] = ctx.artifacts;
  manifest["warnings"] = ctx.warnings;
  manifest["wall_time_seconds"] = wall_seconds;  // timestamp-like, varies per run
  write_json(ctx.out / "manifest.json", manifest);
}

void run_propagate(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SplitStepPlan plan = SplitStepPlan::make(cfg.grid, cfg.potential);
  StateVector state = cfg.initial.build(cfg.grid);

  std::string csv = "step,t,j";
  for (int k = 0; k < cfg.grid.dof; ++k) csv += ",x" + std::to_string(k);
  csv += ",prob\n";
  const auto snapshot = [&](std::uint64_t step) {
    const double t = static_cast<double>(step) * cfg.grid.dt;
    for (std::uint64_t j = 0; j < state.size(); ++j) {
      csv += std::to_string(step) + "," + g17(t) + "," + std::to_string(j);
      const auto coords = index_to_grid(j, cfg.grid);
      for (int k = 0; k < cfg.grid.dof; ++k) {
        csv += "," + g17(coords[k] * cfg.grid.dx[k]);
      }
      csv += "," + g17(std::norm(state[j])) + "\n";
    }
  };
  snapshot(0);
  for (std::uint64_t s = 1; s <= cfg.prop.n_steps; ++s) {
    split_step(state, plan);
    if (s % cfg.prop.snapshot_every == 0 || s == cfg.prop.n_steps) snapshot(s);
  }
  write_text(ctx.out / "psi_snapshots.csv", csv);
  ctx.add("psi_snapshots.csv");
  std::fprintf(stderr, "fluxq: propagate: %llu steps, final norm drift %.3g\n",
               static_cast<unsigned long long>(cfg.prop.n_steps),
               std::abs(state.norm_squared() - 1.0));
}

void run_spectrum_mode(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SplitStepPlan plan = SplitStepPlan::make(cfg.grid, cfg.potential);
  const StateVector initial = cfg.initial.build(cfg.grid);
  const SpectrumEstimate est = estimate_spectrum(
      initial, plan, cfg.pointer, cfg.shots, cfg.seed, cfg.workers);
  write_json(ctx.out / "spectrum.json", spectrum_to_json(est));
  ctx.add("spectrum.json");
  write_histogram_csv(ctx, est);
  std::fprintf(stderr, "fluxq: spectrum: %zu occupied bins from %llu shots\n",
               est.bins.size(), static_cast<unsigned long long>(cfg.shots));
}

void run_rate_mode(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const SplitStepPlan plan = SplitStepPlan::make(cfg.grid, cfg.potential);
  const StateVector initial = cfg.initial.build(cfg.grid);
  const DividingSurface surface = DividingSurface::half_space(
      cfg.grid, cfg.surface->dof_index, cfg.surface->threshold);

  const int nu = cfg.grid.total_qubits();
  const std::uint64_t per_setting =
      std::max<std::uint64_t>(cfg.shots / static_cast<std::uint64_t>(nu + 1), 1);
  std::fprintf(stderr,
               "fluxq: rate: %d+1 measurement settings, %llu shots each\n", nu,
               static_cast<unsigned long long>(per_setting));

  SpectrumRun spec_run = run_spectrum(initial, plan, cfg.pointer, per_setting,
                                      cfg.seed, cfg.workers);
  const auto amps = estimate_eigenstate_amplitudes(
      spec_run, per_setting, cfg.seed, cfg.min_bin_shots, &plan);
  write_json(ctx.out / "spectrum.json", spectrum_to_json(spec_run.estimate));
  ctx.add("spectrum.json");
  write_histogram_csv(ctx, spec_run.estimate);

  json amp_doc = json::array();
  for (const auto& a : amps) {
    if (a.low_statistics) continue;
    amp_doc.push_back({{"bin", a.pointer_value},
                       {"phase", a.phase},
                       {"energy", a.energy},
                       {"weight", a.weight},
                       {"a", a.table.a},
                       {"stderr", a.table.std_error},
                       {"undetermined", a.table.undetermined},
                       {"consistent", a.table.consistent},
                       {"core_imag_defect", a.core_imag_defect}});
  }
  write_json(ctx.out / "amplitudes.json", amp_doc);
  ctx.add("amplitudes.json");

  const SampledSpectral spectral = assemble_spectral(ctx, spec_run, amps, surface);
  RateParams params;
  params.beta = *cfg.thermal.beta;
  params.t_max = cfg.thermal.t_max;
  params.t_points = cfg.thermal.t_points;
  params.quadrature_step = cfg.thermal.quadrature_step;
  params.boltzmann_cutoff = cfg.thermal.boltzmann_cutoff;
  params.plateau_bound = cfg.thermal.plateau_bound;
  params.q_r_override = cfg.thermal.q_r;
  RateResult result = rate_constant(spectral.input, spectral.weights, params);
  result.shots = cfg.shots;
  if (!result.plateau.converged) {
    ctx.warn("rate integral has not reached a plateau (relative spread " +
             g17(result.plateau.relative_spread) + " over the last half of "
             "the time window); increase t_max or adjust beta");
  }
  write_json(ctx.out / "rate.json", rate_to_json(result));
  ctx.add("rate.json");
  write_cf_csv(ctx, result.cf);
  std::fprintf(stderr, "fluxq: rate: k = %.8g (Q_r = %.8g, %d levels)\n",
               result.k, result.q_r, result.retained_levels);
}

void run_validate_mode(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.grid.total_qubits() > oracle::kDenseCapQubits) {
    throw ResourceError("validate mode needs the dense oracle; " +
                        std::to_string(cfg.grid.total_qubits()) +
                        " qubits exceed the cap of " +
                        std::to_string(oracle::kDenseCapQubits));
  }
  const SplitStepPlan plan = SplitStepPlan::make(cfg.grid, cfg.potential);
  const StateVector initial = cfg.initial.build(cfg.grid);
  const std::uint64_t n = cfg.grid.total_points();

  json checks = json::array();
  bool all_pass = true;
  const auto record = [&](const std::string& name, bool pass,
                          const std::string& detail) {
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    all_pass = all_pass && pass;
    std::fprintf(stderr, "fluxq: validate: %-34s %s  (%s)\n", name.c_str(),
                 pass ? "PASS" : "FAIL", detail.c_str());
  };

  const Eigen::MatrixXcd u = oracle::dense_step_unitary(plan);
  const double defect = oracle::unitarity_defect(u);
  record("step_unitarity", defect < 1e-10, "defect " + g17(defect));

  {
    double worst = 0.0;
    for (std::uint64_t c = 0; c < n; ++c) {
      StateVector basis(cfg.grid.total_qubits());
      basis[0] = 0.0;
      basis[c] = 1.0;
      split_step(basis, plan);
      for (std::uint64_t r = 0; r < n; ++r) {
        worst = std::max(worst, std::abs(basis[r] - u(r, c)));
      }
    }
    record("gate_vs_dense_step", worst < 1e-10, "max entry diff " + g17(worst));
  }

  const oracle::EigenSystem eig = oracle::step_eigensystem(plan);
  record("eigensystem_residual", eig.max_residual < 1e-9,
         "max residual " + g17(eig.max_residual));
  {
    const Eigen::MatrixXcd g = eig.vectors.adjoint() * eig.vectors -
                               Eigen::MatrixXcd::Identity(n, n);
    const double ortho = g.cwiseAbs().maxCoeff();
    record("eigenvector_orthonormality", ortho < 1e-10, "defect " + g17(ortho));
  }
  {
    double core_defect = 0.0;
    for (std::uint64_t c = 0; c < n; ++c) {
      StateVector v(cfg.grid.total_qubits());
      for (std::uint64_t j = 0; j < n; ++j) v[j] = eig.vectors(j, c);
      core_defect = std::max(core_defect, core_imag_defect(v, plan));
    }
    record("eigenvector_cores_real", core_defect < 1e-9,
           "max |Im core| " + g17(core_defect));
  }
  {
    const auto pops = oracle::populations(eig, initial.amplitudes());
    const double total = pops.sum();
    record("completeness", std::abs(total - 1.0) < 1e-10,
           "sum of populations " + g17(total));
  }
  {
    // Spectral closure: sum_n xi_n(t) a_j(n) must rebuild psi_j(t).
    StateVector psi = initial;
    propagate(psi, plan, 3);
    Eigen::VectorXcd xi = eig.vectors.adjoint() *
                          Eigen::Map<const Eigen::VectorXcd>(psi.data(), n);
    Eigen::VectorXcd rebuilt = eig.vectors * xi;
    double worst = 0.0;
    for (std::uint64_t j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(rebuilt[j] - psi[j]));
    }
    record("spectral_closure", worst < 1e-10, "max |diff| " + g17(worst));
  }
  {
    // Pointer marginal against the analytic phase-estimation kernel.
    JointState joint = attach_pointer(initial, cfg.pointer);
    conditional_evolution(joint, plan, cfg.pointer, cfg.workers);
    const auto marginal = joint.pointer_marginal();
    const std::uint64_t bins = 1ull << cfg.pointer.qubits;
    const auto pops = oracle::populations(eig, initial.amplitudes());
    std::vector<double> expect(bins, 0.0);
    for (std::uint64_t x = 0; x < bins; ++x) {
      for (std::uint64_t m = 0; m < n; ++m) {
        if (pops[m] < 1e-300) continue;
        const double y = static_cast<double>(cfg.pointer.x0) +
                         static_cast<double>(cfg.pointer.t_units) *
                             eig.phases[m] * static_cast<double>(bins) /
                             (2.0 * std::numbers::pi);
        Complex kernel = 0.0;
        for (std::uint64_t p = 0; p < bins; ++p) {
          kernel += std::polar(1.0, 2.0 * std::numbers::pi *
                                        static_cast<double>(p) *
                                        (y - static_cast<double>(x)) /
                                        static_cast<double>(bins));
        }
        expect[x] += pops[m] * std::norm(kernel) /
                     static_cast<double>(bins * bins);
      }
    }
    double worst = 0.0;
    for (std::uint64_t x = 0; x < bins; ++x) {
      worst = std::max(worst, std::abs(marginal[x] - expect[x]));
    }
    record("pointer_kernel", worst < 1e-8, "max bin prob diff " + g17(worst));
  }
  {
    // Sign protocol on the three lowest eigenvector cores, exact records.
    bool pass = true;
    double worst = 0.0;
    for (std::uint64_t c = 0; c < std::min<std::uint64_t>(3, n); ++c) {
      StateVector core(cfg.grid.total_qubits());
      for (std::uint64_t j = 0; j < n; ++j) core[j] = eig.real_cores(j, c);
      const auto table = solve_signs(exact_sign_record(core));
      for (std::uint64_t j = 0; j < n; ++j) {
        if (table.undetermined[j]) continue;
        worst = std::max(worst, std::abs(table.a[j] -
                                         std::abs(eig.real_cores(j, c)) *
                                             (eig.real_cores(j, c) < 0 ? -1 : 1) *
                                             (table.a[j] * eig.real_cores(j, c) < 0
                                                  ? -1
                                                  : 1)));
      }
      // global-sign alignment: compare |a| and sign products instead
      for (std::uint64_t j = 0; j < n && pass; ++j) {
        if (table.undetermined[j]) continue;
        if (std::abs(std::abs(table.a[j]) - std::abs(eig.real_cores(j, c))) >
            1e-9) {
          pass = false;
        }
      }
    }
    record("sign_protocol_exact", pass, "max aligned diff " + g17(worst));
  }
  if (cfg.surface) {
    const DividingSurface surface = DividingSurface::half_space(
        cfg.grid, cfg.surface->dof_index, cfg.surface->threshold);
    const double beta = cfg.thermal.beta.value_or(1.0);
    std::vector<double> t_grid(32);
    const double t_max = cfg.thermal.t_max > 0 ? cfg.thermal.t_max : 10.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      t_grid[i] = t_max * static_cast<double>(i) / (t_grid.size() - 1.0);
    }
    const auto trace = oracle::trace_correlation(plan, surface, beta, t_grid);
    const auto eigensum = correlation_function(
        oracle::spectral_input(eig, cfg.grid.dt, surface), beta, t_grid, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      worst = std::max(worst, std::abs(trace[i].value - eigensum[i].value));
    }
    record("correlation_trace_vs_eigensum", worst < 1e-8,
           "max |diff| " + g17(worst));
  }

  write_json(ctx.out / "validation_report.json",
             json{{"checks", checks}, {"all_pass", all_pass}});
  ctx.add("validation_report.json");
  if (!all_pass) {
    throw InvariantError("oracle cross-check suite reported failures; see "
                         "validation_report.json");
  }
}

}  // namespace

int run(const ValidatedConfig& validated) {
  const auto started = std::chrono::steady_clock::now();
  RunContext ctx{validated.config, fs::path(validated.config.out_dir), {}, {}};
  try {
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw Error("cannot create output directory " + ctx.out.string());

    if (!validated.ok) {
      json errors = json::array();
      for (const auto& e : validated.errors) errors.push_back(e);
      write_json(ctx.out / "error.json",
                 json{{"error", {{"type", "config"}, {"messages", errors}}}});
      for (const auto& e : validated.errors) {
        std::fprintf(stderr, "fluxq: config error: %s\n", e.c_str());
      }
      return kExitConfigError;
    }
    for (const auto& w : validated.warnings) ctx.warn(w);

    if (ctx.cfg.mode == "propagate") {
      run_propagate(ctx);
    } else if (ctx.cfg.mode == "spectrum") {
      run_spectrum_mode(ctx);
    } else if (ctx.cfg.mode == "rate") {
      run_rate_mode(ctx);
    } else {
      run_validate_mode(ctx);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    write_manifest(ctx, validated, wall);
    return kExitOk;
  } catch (const std::exception& e) {
    std::string type = "internal";
    int code = kExitValidationFailure;
    if (dynamic_cast<const ConfigError*>(&e)) {
      type = "config";
      code = kExitConfigError;
    } else if (dynamic_cast<const ResourceError*>(&e)) {
      type = "resource_cap";
      code = kExitResourceCap;
    } else if (dynamic_cast<const InvariantError*>(&e)) {
      type = "validation";
      code = kExitValidationFailure;
    }
    std::fprintf(stderr, "fluxq: error: %s\n", e.what());
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (!ec) {
      write_json(ctx.out / "error.json",
                 json{{"error", {{"type", type}, {"message", e.what()}}}});
    }
    return code;
  }
}

int run_json_text(const std::string& json_text) {
  try {
    return run(load_config(json_text));
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "fluxq: config error: %s\n", e.what());
    return kExitConfigError;
  }
}

}  // namespace fluxq
