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

#include "fluxq/potential.hpp"

#include <cmath>

namespace fluxq {

PotentialSpec PotentialSpec::free_particle() { return {}; }

PotentialSpec PotentialSpec::harmonic(std::vector<double> omega,
                                      std::vector<double> center) {
  PotentialSpec p;
  p.kind = Kind::kHarmonic;
  p.omega = std::move(omega);
  p.center = std::move(center);
  return p;
}

PotentialSpec PotentialSpec::eckart(double barrier_height, double width,
                                    double center) {
  PotentialSpec p;
  p.kind = Kind::kEckart;
  p.barrier_height = barrier_height;
  p.width = width;
  if (center >= 0.0) p.center = {center};
  return p;
}

PotentialSpec PotentialSpec::double_well(double quartic, double quadratic,
                                         double center) {
  PotentialSpec p;
  p.kind = Kind::kDoubleWell;
  p.quartic = quartic;
  p.quadratic = quadratic;
  if (center >= 0.0) p.center = {center};
  return p;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> values) {
  PotentialSpec p;
  p.kind = Kind::kTabulated;
  p.table = std::move(values);
  return p;
}

std::string PotentialSpec::kind_name() const {
  switch (kind) {
    case Kind::kFree: return "free";
    case Kind::kHarmonic: return "harmonic";
    case Kind::kEckart: return "eckart";
    case Kind::kDoubleWell: return "double_well";
    case Kind::kTabulated: return "tabulated";
  }
  return "?";
}

double PotentialSpec::evaluate(const GridSpec& grid, std::uint64_t j) const {
  double v = offset;
  if (kind == Kind::kTabulated) {
    if (table.size() != grid.total_points()) {
      throw ConfigError("tabulated potential has " + std::to_string(table.size()) +
                        " values, grid has " + std::to_string(grid.total_points()));
    }
    v += table[j];
  } else if (kind != Kind::kFree) {
    const std::vector<int> coords = index_to_grid(j, grid);
    for (int k = 0; k < grid.dof; ++k) {
      const double x = coords[k] * grid.dx[k];
      const double c = k < static_cast<int>(center.size())
                           ? center[k]
                           : 0.5 * static_cast<double>(grid.points_per_dof()) *
                                 grid.dx[k];
      const double r = x - c;
      switch (kind) {
        case Kind::kHarmonic: {
          if (static_cast<int>(omega.size()) != grid.dof) {
            throw ConfigError("harmonic potential needs one omega per degree");
          }
          v += 0.5 * grid.mass[k] * omega[k] * omega[k] * r * r;
          break;
        }
        case Kind::kEckart: {
          const double s = 1.0 / std::cosh(r / width);
          v += barrier_height * s * s;
          break;
        }
        case Kind::kDoubleWell: {
          v += quartic * r * r * r * r - quadratic * r * r;
          break;
        }
        default:
          break;
      }
    }
  }
  if (!std::isfinite(v)) {
    throw NumericError("potential is not finite at basis index " +
                       std::to_string(j));
  }
  return v;
}

std::vector<double> PotentialSpec::evaluate_all(const GridSpec& grid) const {
  std::vector<double> v(grid.total_points());
  for (std::uint64_t j = 0; j < v.size(); ++j) v[j] = evaluate(grid, j);
  return v;
}

}  // namespace fluxq
