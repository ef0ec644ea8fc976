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

#include "fluxq/config.hpp"

namespace fluxq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitValidationFailure = 3;
inline constexpr int kExitResourceCap = 4;

/// Executes one batch run, writing artifact files (and a manifest) into
/// the configured output directory. Progress goes to stderr; machine
/// artifacts go to files only. Returns the process exit code; on any
/// failure an error.json with {error: {type, message}} is written.
int run(const ValidatedConfig& validated);

/// Parse + validate + run a JSON document from text.
int run_json_text(const std::string& json_text);

}  // namespace fluxq
