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

#include "fluxq/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fluxq/propagator.hpp"

namespace fluxq {

namespace {

using nlohmann::json;

std::vector<double> as_double_vector(const json& v) {
  if (v.is_number()) return {v.get<double>()};
  return v.get<std::vector<double>>();
}

PotentialSpec parse_potential(const json& p, std::vector<std::string>& errors) {
  PotentialSpec spec;
  const std::string kind = p.value("kind", "free");
  if (kind == "free") {
    spec = PotentialSpec::free_particle();
  } else if (kind == "harmonic") {
    if (!p.contains("omega")) {
      errors.push_back("potential.harmonic requires omega");
      return spec;
    }
    spec = PotentialSpec::harmonic(as_double_vector(p.at("omega")));
    if (p.contains("center")) spec.center = as_double_vector(p.at("center"));
  } else if (kind == "eckart") {
    if (!p.contains("barrier_height") || !p.contains("width")) {
      errors.push_back("potential.eckart requires barrier_height and width");
      return spec;
    }
    spec = PotentialSpec::eckart(p.at("barrier_height").get<double>(),
                                 p.at("width").get<double>());
    if (p.contains("center")) spec.center = as_double_vector(p.at("center"));
  } else if (kind == "double_well") {
    if (!p.contains("quartic") || !p.contains("quadratic")) {
      errors.push_back("potential.double_well requires quartic and quadratic");
      return spec;
    }
    spec = PotentialSpec::double_well(p.at("quartic").get<double>(),
                                      p.at("quadratic").get<double>());
    if (p.contains("center")) spec.center = as_double_vector(p.at("center"));
  } else if (kind == "tabulated") {
    if (!p.contains("values")) {
      errors.push_back("potential.tabulated requires values");
      return spec;
    }
    spec = PotentialSpec::tabulated(p.at("values").get<std::vector<double>>());
  } else {
    errors.push_back("unknown potential kind '" + kind + "'");
  }
  spec.offset = p.value("offset", 0.0);
  return spec;
}

InitialStateSpec parse_initial(const json& doc,
                               std::vector<std::string>& errors) {
  InitialStateSpec spec;
  if (!doc.contains("initial")) return spec;  // uniform default
  const json& p = doc.at("initial");
  const std::string kind = p.value("kind", "uniform");
  if (kind == "uniform") {
    spec.kind = InitialStateSpec::Kind::kUniform;
  } else if (kind == "delta") {
    spec.kind = InitialStateSpec::Kind::kDelta;
    if (!p.contains("coords")) {
      errors.push_back("initial.delta requires coords");
    } else {
      spec.coords = p.at("coords").get<std::vector<int>>();
    }
  } else if (kind == "gaussian") {
    spec.kind = InitialStateSpec::Kind::kGaussian;
    if (!p.contains("center") || !p.contains("sigma")) {
      errors.push_back("initial.gaussian requires center and sigma");
    } else {
      spec.center = as_double_vector(p.at("center"));
      spec.sigma = as_double_vector(p.at("sigma"));
      if (p.contains("momentum")) spec.momentum = as_double_vector(p.at("momentum"));
    }
  } else if (kind == "amplitudes") {
    spec.kind = InitialStateSpec::Kind::kAmplitudes;
    if (!p.contains("re")) {
      errors.push_back("initial.amplitudes requires re (and optional im)");
    } else {
      const auto re = p.at("re").get<std::vector<double>>();
      std::vector<double> im(re.size(), 0.0);
      if (p.contains("im")) im = p.at("im").get<std::vector<double>>();
      if (im.size() != re.size()) {
        errors.push_back("initial.amplitudes re and im differ in length");
      } else {
        spec.amplitudes.resize(re.size());
        for (std::size_t j = 0; j < re.size(); ++j) {
          spec.amplitudes[j] = Complex{re[j], im[j]};
        }
      }
    }
  } else {
    errors.push_back("unknown initial kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

StateVector InitialStateSpec::build(const GridSpec& grid) const {
  StateVector state(grid.total_qubits());
  switch (kind) {
    case Kind::kUniform:
      uniform_superposition(state);
      break;
    case Kind::kDelta: {
      const std::uint64_t j = grid_to_index(coords, grid);
      state[0] = 0.0;
      state[j] = 1.0;
      break;
    }
    case Kind::kGaussian: {
      const auto amps = gaussian_wavepacket(grid, center, sigma, momentum);
      load_wavefunction(state, amps);
      break;
    }
    case Kind::kAmplitudes:
      load_wavefunction(state, amplitudes);
      break;
  }
  return state;
}

std::string InitialStateSpec::kind_name() const {
  switch (kind) {
    case Kind::kUniform: return "uniform";
    case Kind::kDelta: return "delta";
    case Kind::kGaussian: return "gaussian";
    case Kind::kAmplitudes: return "amplitudes";
  }
  return "?";
}

RunConfig parse_config(const nlohmann::json& doc) {
  std::vector<std::string> errors;
  RunConfig cfg;
  cfg.mode = doc.value("mode", "");

  if (!doc.contains("grid")) {
    errors.push_back("grid section is required");
  } else {
    const json& g = doc.at("grid");
    cfg.grid.dof = g.value("dof", 1);
    cfg.grid.qubits_per_dof = g.value("qubits_per_dof", 0);
    if (g.contains("dx")) cfg.grid.dx = as_double_vector(g.at("dx"));
    if (g.contains("mass")) cfg.grid.mass = as_double_vector(g.at("mass"));
    if (cfg.grid.dx.size() == 1 && cfg.grid.dof > 1) {
      cfg.grid.dx.assign(cfg.grid.dof, cfg.grid.dx[0]);
    }
    if (cfg.grid.mass.size() == 1 && cfg.grid.dof > 1) {
      cfg.grid.mass.assign(cfg.grid.dof, cfg.grid.mass[0]);
    }
    if (g.contains("dt")) {
      if (g.at("dt").is_string()) {
        if (g.at("dt").get<std::string>() == "auto") {
          cfg.dt_auto = true;
        } else {
          errors.push_back("grid.dt must be a number or \"auto\"");
        }
      } else {
        cfg.grid.dt = g.at("dt").get<double>();
      }
    } else {
      cfg.dt_auto = true;
    }
  }

  if (doc.contains("potential")) {
    cfg.potential = parse_potential(doc.at("potential"), errors);
  }
  cfg.initial = parse_initial(doc, errors);

  if (doc.contains("surface")) {
    SurfaceSpec s;
    s.dof_index = doc.at("surface").value("dof", 0);
    if (!doc.at("surface").contains("threshold")) {
      errors.push_back("surface requires threshold");
    } else {
      s.threshold = doc.at("surface").at("threshold").get<double>();
    }
    cfg.surface = s;
  }

  if (doc.contains("pointer")) {
    const json& p = doc.at("pointer");
    cfg.pointer.qubits = p.value("qubits", 8);
    cfg.pointer.x0 = p.value("x0", 0);
    cfg.pointer.t_units = p.value("t_units", std::uint64_t{1});
  }

  if (doc.contains("sampling")) {
    const json& s = doc.at("sampling");
    cfg.shots = s.value("shots", std::uint64_t{0});
    cfg.seed = s.value("seed", std::uint64_t{0});
    cfg.min_bin_weight = s.value("min_bin_weight", 0.005);
    cfg.min_bin_shots = s.value("min_bin_shots", std::uint64_t{100});
  }

  if (doc.contains("thermal")) {
    const json& t = doc.at("thermal");
    if (t.contains("beta")) cfg.thermal.beta = t.at("beta").get<double>();
    cfg.thermal.boltzmann_cutoff = t.value("boltzmann_cutoff", 1e-8);
    cfg.thermal.t_max = t.value("t_max", 0.0);
    cfg.thermal.t_points = t.value("t_points", 100);
    cfg.thermal.quadrature_step = t.value("quadrature_step", 0.0);
    cfg.thermal.plateau_bound = t.value("plateau_bound", 0.05);
    if (t.contains("q_r") && !t.at("q_r").is_null()) {
      cfg.thermal.q_r = t.at("q_r").get<double>();
    }
  }

  if (doc.contains("propagate")) {
    cfg.prop.n_steps = doc.at("propagate").value("n_steps", std::uint64_t{0});
    cfg.prop.snapshot_every =
        doc.at("propagate").value("snapshot_every", std::uint64_t{1});
  }

  if (doc.contains("output")) {
    cfg.out_dir = doc.at("output").value("dir", "out");
  }
  cfg.workers = doc.value("workers", 0);

  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "config parse errors:";
    for (const auto& e : errors) msg << "\n  - " << e;
    throw ConfigError(msg.str());
  }
  return cfg;
}

ValidatedConfig validate_config(RunConfig config) {
  ValidatedConfig out;

  // Normalize dt before structural checks.
  if (config.dt_auto && config.grid.qubits_per_dof >= 1 &&
      !config.grid.dx.empty() && !config.grid.mass.empty()) {
    config.grid.dt = GridSpec::consistent_dt(config.grid.mass[0], config.grid.dx[0],
                                             config.grid.qubits_per_dof);
  }

  if (config.mode != "propagate" && config.mode != "spectrum" &&
      config.mode != "rate" && config.mode != "validate") {
    out.errors.push_back("mode must be one of propagate|spectrum|rate|validate, got '" +
                         config.mode + "'");
  }

  try {
    config.grid.validate();
  } catch (const Error& e) {
    out.errors.push_back(e.what());
  }

  const bool needs_sampling = config.mode == "spectrum" || config.mode == "rate";
  if (needs_sampling) {
    if (config.shots == 0) {
      out.errors.push_back("sampling.shots must be >= 1 in " + config.mode +
                           " mode");
    }
    try {
      config.pointer.validate();
    } catch (const Error& e) {
      out.errors.push_back(e.what());
    }
    if (config.pointer.t_units < 1) {
      out.errors.push_back("pointer.t_units must be >= 1");
    }
  }

  if (config.mode == "rate") {
    if (!config.thermal.beta) {
      out.errors.push_back("thermal.beta is required in rate mode");
    } else if (*config.thermal.beta <= 0.0) {
      out.errors.push_back("thermal.beta must be positive");
    }
    if (config.thermal.t_max <= 0.0) {
      out.errors.push_back("thermal.t_max must be positive in rate mode");
    }
    if (!config.surface) {
      out.errors.push_back("surface is required in rate mode");
    }
  }

  // Grid-dependent pieces only make sense once the grid itself is sound.
  if (out.errors.empty()) {
    if (config.surface) {
      try {
        const auto surf = DividingSurface::half_space(
            config.grid, config.surface->dof_index, config.surface->threshold);
        if (config.mode == "rate" &&
            (surf.product_count() == 0 || surf.reactant_count() == 0)) {
          out.errors.push_back(
              "dividing surface leaves one side empty; the flux vanishes "
              "identically");
        }
      } catch (const Error& e) {
        out.errors.push_back(e.what());
      }
    }
    try {
      const auto v = config.potential.evaluate_all(config.grid);
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      const double spread_phase = (*hi - *lo) * config.grid.dt;
      if (spread_phase >= std::numbers::pi) {
        std::ostringstream w;
        w << "potential phase spread (Vmax-Vmin)*dt = " << spread_phase
          << " rad >= pi: sign extraction on collapsed eigenstates becomes "
             "unreliable";
        out.warnings.push_back(w.str());
      }
      if (config.thermal.beta && needs_sampling) {
        const double band = 2.0 * std::numbers::pi /
                            (config.grid.dt *
                             static_cast<double>(std::max<std::uint64_t>(
                                 config.pointer.t_units, 1)));
        if (std::exp(-0.5 * *config.thermal.beta * band) >
            config.thermal.boltzmann_cutoff) {
          std::ostringstream w;
          w << "thermally retained band exceeds one principal branch "
               "(width "
            << band << "); quasi-energies will alias";
          out.warnings.push_back(w.str());
        }
      }
      try {
        const StateVector probe = config.initial.build(config.grid);
        (void)probe;
      } catch (const Error& e) {
        out.errors.push_back(std::string("initial state: ") + e.what());
      }
    } catch (const Error& e) {
      out.errors.push_back(e.what());
    }
  }

  if (config.mode == "propagate" && config.prop.snapshot_every == 0) {
    out.errors.push_back("propagate.snapshot_every must be >= 1");
  }

  out.ok = out.errors.empty();
  out.config = config;

  nlohmann::json echo;
  echo["mode"] = config.mode;
  echo["grid"] = {{"dof", config.grid.dof},
                  {"qubits_per_dof", config.grid.qubits_per_dof},
                  {"dx", config.grid.dx},
                  {"mass", config.grid.mass},
                  {"dt", config.grid.dt}};
  echo["derived"] = {
      {"total_qubits", config.grid.dof * config.grid.qubits_per_dof},
      {"total_points", 1ull << (config.grid.dof * config.grid.qubits_per_dof)},
      {"pointer_bins", 1ull << config.pointer.qubits},
      {"phase_bin_width", config.pointer.phase_bin_width()},
      {"energy_band_width",
       2.0 * std::numbers::pi /
           (config.grid.dt *
            static_cast<double>(std::max<std::uint64_t>(config.pointer.t_units, 1)))}};
  echo["potential"] = {{"kind", config.potential.kind_name()},
                       {"offset", config.potential.offset}};
  echo["initial"] = config.initial.kind_name();
  if (config.surface) {
    echo["surface"] = {{"dof", config.surface->dof_index},
                       {"threshold", config.surface->threshold}};
  }
  echo["pointer"] = {{"qubits", config.pointer.qubits},
                     {"x0", config.pointer.x0},
                     {"t_units", config.pointer.t_units}};
  echo["sampling"] = {{"shots", config.shots},
                      {"seed", config.seed},
                      {"min_bin_weight", config.min_bin_weight},
                      {"min_bin_shots", config.min_bin_shots}};
  if (config.thermal.beta) {
    echo["thermal"] = {{"beta", *config.thermal.beta},
                       {"boltzmann_cutoff", config.thermal.boltzmann_cutoff},
                       {"t_max", config.thermal.t_max},
                       {"t_points", config.thermal.t_points},
                       {"plateau_bound", config.thermal.plateau_bound}};
    if (config.thermal.q_r) echo["thermal"]["q_r"] = *config.thermal.q_r;
  }
  echo["workers"] = config.workers;
  out.echo = echo;
  return out;
}

ValidatedConfig load_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return validate_config(parse_config(doc));
}

}  // namespace fluxq
