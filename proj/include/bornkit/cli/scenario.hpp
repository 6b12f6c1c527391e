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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bornkit/hilbert.hpp"
#include "bornkit/mixtures.hpp"
#include "bornkit/premeasurement.hpp"
#include "bornkit/schmidt.hpp"

namespace bornkit::cli {

inline constexpr const char* kScenarioSchema = "bornkit.scenario/v1";

using Amplitudes = std::vector<Complex>;
using Span = std::vector<Amplitudes>;

struct ObservableSpec {
    bool complete = false;  // given as an eigenbasis, one vector per eigenvalue
    std::vector<double> eigenvalues;
    std::vector<Span> projectors;

    bool operator==(const ObservableSpec&) const = default;
};

struct ApparatusSpec {
    Amplitudes ready;
    std::vector<Amplitudes> pointer_states;
    std::vector<double> pointer_eigenvalues;
    // Exactly one of these is set after parsing.
    std::optional<std::vector<Span>> pointer_projectors;
    std::optional<std::vector<std::size_t>> pointer_ranks;

    bool operator==(const ApparatusSpec&) const = default;
};

enum class CouplingKind { constructed, identity, matrix };

struct CouplingSpec {
    CouplingKind kind = CouplingKind::constructed;
    std::vector<Amplitudes> rows;  // kind == matrix

    bool operator==(const CouplingSpec&) const = default;
};

struct BipartiteSpec {
    FactorDims dims{1, 1};
    Amplitudes state;

    bool operator==(const BipartiteSpec&) const = default;
};

struct MixtureComponentSpec {
    Amplitudes state;
    double weight = 0.0;

    bool operator==(const MixtureComponentSpec&) const = default;
};

struct MixtureScenario {
    std::vector<MixtureComponentSpec> components;
    std::optional<std::vector<std::uint64_t>> counts;
    std::optional<BipartiteSpec> purification;  // absent: canonical purification

    bool operator==(const MixtureScenario&) const = default;
};

struct SamplingSpec {
    std::uint64_t samples = 0;
    std::size_t parts = 1;
    // Test hook: added to the sampled counts before the frequency check.
    std::optional<std::vector<std::int64_t>> count_shift;

    bool operator==(const SamplingSpec&) const = default;
};

struct Scenario {
    std::string name;
    std::string description;
    std::optional<FactorDims> dims;
    std::optional<ObservableSpec> observable;
    std::optional<ApparatusSpec> apparatus;
    CouplingSpec coupling;
    std::vector<Amplitudes> inputs;
    std::optional<BipartiteSpec> bipartite;
    std::optional<MixtureScenario> mixture;
    std::optional<SamplingSpec> sampling;
    std::uint64_t seed = 0;
    std::size_t trials = 50;
    Tolerances tolerances;

    bool operator==(const Scenario&) const = default;
};

/// Parses and validates shapes. Missing optional fields are resolved to
/// their defaults so the result is canonical. `base` supplies tolerance
/// defaults. Throws InputError.
Scenario parse_scenario(const nlohmann::json& j, const Tolerances& base = {});

/// Canonical form; parse_scenario(to_json(s)) == s.
nlohmann::json to_json(const Scenario& s);

nlohmann::json complex_to_json(Complex c);
nlohmann::json amplitudes_to_json(const Vector& v);

// Builders from a validated scenario to library objects. Throw InputError.
Observable build_observable(const Scenario& s);
PointerApparatus build_apparatus(const Scenario& s);
PremeasurementModel build_model(const Scenario& s);
std::vector<StateVector> build_inputs(const Scenario& s);
BipartiteState build_bipartite(const BipartiteSpec& spec);
MixtureSpec build_mixture(const Scenario& s);

}  // namespace bornkit::cli
