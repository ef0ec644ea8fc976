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

#include <stdexcept>
#include <string>

namespace fluxq {

/// Base class for all fluxq errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad parameters or a config that violates a structural constraint
/// (e.g. the grid resonance condition). CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Index or coordinate outside the register/grid.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value encountered where a finite one is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A runtime invariant (normalization, unitarity, consistency check)
/// failed. CLI exit code 3.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds an implementation cap. CLI exit code 4.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace fluxq
