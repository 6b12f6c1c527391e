// Copyright 2026 The Bornkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bornkit/cli/scenario.hpp"

namespace bornkit::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kInputError = 2 };

/// Environment variable holding the default operator tolerance.
inline constexpr const char* kToleranceEnv = "BORNKIT_TOLERANCE";

struct RunOptions {
    std::optional<double> tolerance;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    bool fail_fast = false;
};

/// Applies environment and command-line overrides to a parsed scenario file.
Scenario resolve_scenario(const nlohmann::json& file, const RunOptions& options);

struct CommandResult {
    nlohmann::json report;
    int exit_code = kPass;
};

// Each command returns the structured report and the exit code. Input errors
// surface as InputError.
CommandResult cmd_schmidt(const Scenario& s);
CommandResult cmd_derive(const Scenario& s, bool fail_fast = false);
CommandResult cmd_mixtures(const Scenario& s);
CommandResult cmd_sample(const Scenario& s, bool fail_fast = false);

/// Full command-line entry point; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bornkit::cli
