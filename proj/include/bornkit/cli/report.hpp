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

#include <ostream>

#include <json.hpp>

#include "bornkit/born.hpp"
#include "bornkit/ensemble.hpp"
#include "bornkit/mixtures.hpp"
#include "bornkit/schmidt.hpp"

namespace bornkit::cli {

inline constexpr const char* kReportSchema = "bornkit.report/v1";

nlohmann::json to_json(const SchmidtForm& form);
nlohmann::json to_json(const ProbabilityReport& report);
nlohmann::json to_json(const EquivalenceReport& report);
nlohmann::json to_json(const SampleRun& run, const FrequencyReport& check);

/// Serialized structured report, byte-stable for a given value.
std::string dump_report(const nlohmann::json& report);

/// Human-readable rendering of a structured report.
void render_text(const nlohmann::json& report, std::ostream& out);

}  // namespace bornkit::cli
