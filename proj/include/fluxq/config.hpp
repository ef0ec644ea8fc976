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

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fluxq/pointer.hpp"
#include "fluxq/potential.hpp"
#include "fluxq/qreg.hpp"
#include "fluxq/rate.hpp"

namespace fluxq {

/// Initial wavefunction choices exposed in the config.
struct InitialStateSpec {
  enum class Kind { kUniform, kDelta, kGaussian, kAmplitudes };
  Kind kind = Kind::kUniform;
  std::vector<int> coords;          // delta
  std::vector<double> center;       // gaussian
  std::vector<double> sigma;        // gaussian
  std::vector<double> momentum;     // gaussian (optional)
  std::vector<Complex> amplitudes;  // explicit table

  StateVector build(const GridSpec& grid) const;
  std::string kind_name() const;
};

struct SurfaceSpec {
  int dof_index = 0;
  double threshold = 0.0;
};

struct ThermalSpec {
  std::optional<double> beta;
  double boltzmann_cutoff = 1e-8;
  double t_max = 0.0;
  int t_points = 100;
  double quadrature_step = 0.0;  // <= 0: auto
  double plateau_bound = 0.05;
  std::optional<double> q_r;  // fixed external reactant partition function
};

struct PropagateSpec {
  std::uint64_t n_steps = 0;
  std::uint64_t snapshot_every = 1;
};

/// One batch run, as described by a single JSON document.
struct RunConfig {
  std::string mode;  // propagate | spectrum | rate | validate
  GridSpec grid;
  bool dt_auto = false;
  PotentialSpec potential;
  InitialStateSpec initial;
  std::optional<SurfaceSpec> surface;
  PointerConfig pointer;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double min_bin_weight = 0.005;
  std::uint64_t min_bin_shots = 100;
  ThermalSpec thermal;
  PropagateSpec prop;
  std::string out_dir = "out";
  int workers = 0;
};

/// Parses the JSON document; throws ConfigError listing every problem.
RunConfig parse_config(const nlohmann::json& doc);

/// Outcome of validation: all problems aggregated, never fail-fast.
struct ValidatedConfig {
  bool ok = false;
  RunConfig config;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  nlohmann::json echo;  // normalized config with derived quantities
};

/// Normalizes (resolves dt = "auto", fills defaulted centers), computes
/// derived quantities (nu, N, bins, principal energy band), and checks
/// every mode requirement and physical constraint.
ValidatedConfig validate_config(RunConfig config);

/// parse + validate of a JSON text.
ValidatedConfig load_config(const std::string& json_text);

}  // namespace fluxq
