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

#include <string>
#include <vector>

#include "fluxq/qreg.hpp"

namespace fluxq {

/// External potential evaluated on the grid, V(j) = V(coords(j) * dx).
/// All kinds accept a constant `offset` added to V; a constant shift is
/// unobservable in correlation functions and rates but lets a config
/// center the quasi-energy band inside one principal branch.
struct PotentialSpec {
  enum class Kind { kFree, kHarmonic, kEckart, kDoubleWell, kTabulated };

  Kind kind = Kind::kFree;
  std::vector<double> omega;    // harmonic frequency per degree
  std::vector<double> center;   // feature location per degree (defaults to box middle)
  double barrier_height = 0.0;  // eckart V0
  double width = 1.0;           // eckart length scale
  double quartic = 0.0;         // double well: quartic*(x-c)^4 - quadratic*(x-c)^2
  double quadratic = 0.0;
  std::vector<double> table;    // tabulated values, one per basis state
  double offset = 0.0;

  static PotentialSpec free_particle();
  static PotentialSpec harmonic(std::vector<double> omega,
                                std::vector<double> center = {});
  static PotentialSpec eckart(double barrier_height, double width,
                              double center = -1.0);
  static PotentialSpec double_well(double quartic, double quadratic,
                                   double center = -1.0);
  static PotentialSpec tabulated(std::vector<double> values);

  std::string kind_name() const;

  /// V at basis index j. Throws NumericError if the value is not finite.
  double evaluate(const GridSpec& grid, std::uint64_t j) const;

  /// V on every grid point.
  std::vector<double> evaluate_all(const GridSpec& grid) const;
};

}  // namespace fluxq
