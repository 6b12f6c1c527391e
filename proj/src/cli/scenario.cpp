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

#include "bornkit/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace bornkit::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError("scenario: " + where + ": " + what);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!ok.contains(item.key())) fail(where, "unknown key '" + item.key() + "'");
    }
}

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where, std::string("missing '") + key + "'");
    return j.at(key);
}

double parse_real(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(where, "non-finite number");
    return x;
}

std::uint64_t parse_count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        fail(where, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

Complex parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {parse_real(j, where), 0.0};
    if (!j.is_array() || j.size() != 2) fail(where, "complex scalars are [re, im] pairs");
    return {parse_real(j[0], where), parse_real(j[1], where)};
}

Amplitudes parse_amplitudes(const json& j, const std::string& where, std::size_t dim) {
    if (!j.is_array()) fail(where, "expected an amplitude array");
    Amplitudes out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
    if (dim != 0 && out.size() != dim) {
        fail(where, "expected " + std::to_string(dim) + " amplitudes, got " + std::to_string(out.size()));
    }
    return out;
}

std::vector<Amplitudes> parse_vector_list(const json& j, const std::string& where, std::size_t dim) {
    if (!j.is_array()) fail(where, "expected a list of vectors");
    std::vector<Amplitudes> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_amplitudes(j[i], where + "[" + std::to_string(i) + "]", dim));
    return out;
}

std::vector<double> parse_reals(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(parse_real(x, where));
    return out;
}

FactorDims parse_dims(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where, "dims must be [d1, d2]");
    const auto d1 = parse_count(j[0], where);
    const auto d2 = parse_count(j[1], where);
    if (d1 == 0 || d2 == 0) fail(where, "dimensions must be positive");
    return {static_cast<std::size_t>(d1), static_cast<std::size_t>(d2)};
}

BipartiteSpec parse_bipartite(const json& j, const std::string& where) {
    check_keys(j, where, {"dims", "state"});
    BipartiteSpec b;
    b.dims = parse_dims(require(j, "dims", where), where + ".dims");
    b.state = parse_amplitudes(require(j, "state", where), where + ".state", b.dims.total());
    return b;
}

ObservableSpec parse_observable(const json& j, std::size_t d1) {
    const std::string where = "observable";
    check_keys(j, where, {"eigenvalues", "projectors", "basis"});
    ObservableSpec o;
    o.eigenvalues = parse_reals(require(j, "eigenvalues", where), where + ".eigenvalues");
    if (j.contains("basis") == j.contains("projectors")) fail(where, "give exactly one of 'basis' or 'projectors'");
    if (j.contains("basis")) {
        o.complete = true;
        for (auto& v : parse_vector_list(j.at("basis"), where + ".basis", d1)) o.projectors.push_back({std::move(v)});
    } else {
        const json& p = j.at("projectors");
        if (!p.is_array()) fail(where + ".projectors", "expected a list of spans");
        for (std::size_t n = 0; n < p.size(); ++n) {
            o.projectors.push_back(parse_vector_list(p[n], where + ".projectors[" + std::to_string(n) + "]", d1));
        }
    }
    if (o.projectors.size() != o.eigenvalues.size()) fail(where, "one projector per eigenvalue required");
    return o;
}

ApparatusSpec parse_apparatus(const json& j, std::size_t d2) {
    const std::string where = "apparatus";
    check_keys(j, where, {"ready", "pointer_states", "pointer_eigenvalues", "pointer_projectors", "pointer_ranks"});
    ApparatusSpec a;
    a.ready = parse_amplitudes(require(j, "ready", where), where + ".ready", d2);
    a.pointer_states = parse_vector_list(require(j, "pointer_states", where), where + ".pointer_states", d2);
    const std::size_t m = a.pointer_states.size();
    if (m == 0) fail(where, "at least one pointer state required");
    if (m > d2) fail(where, "more pointer states than pointer dimensions");
    if (j.contains("pointer_eigenvalues")) {
        a.pointer_eigenvalues = parse_reals(j.at("pointer_eigenvalues"), where + ".pointer_eigenvalues");
        if (a.pointer_eigenvalues.size() != m) fail(where, "one pointer eigenvalue per pointer state required");
    } else {
        for (std::size_t n = 0; n < m; ++n) a.pointer_eigenvalues.push_back(static_cast<double>(n));
    }
    if (j.contains("pointer_projectors") && j.contains("pointer_ranks")) {
        fail(where, "give at most one of 'pointer_projectors' or 'pointer_ranks'");
    }
    if (j.contains("pointer_projectors")) {
        const json& p = j.at("pointer_projectors");
        if (!p.is_array() || p.size() != m) fail(where + ".pointer_projectors", "one span per pointer state required");
        std::vector<Span> spans;
        for (std::size_t n = 0; n < m; ++n) {
            spans.push_back(parse_vector_list(p[n], where + ".pointer_projectors[" + std::to_string(n) + "]", d2));
        }
        a.pointer_projectors = std::move(spans);
    } else {
        std::vector<std::size_t> ranks;
        if (j.contains("pointer_ranks")) {
            const json& r = j.at("pointer_ranks");
            if (!r.is_array() || r.size() != m) fail(where + ".pointer_ranks", "one rank per pointer state required");
            for (const auto& x : r) ranks.push_back(static_cast<std::size_t>(parse_count(x, where + ".pointer_ranks")));
        } else {
            ranks.assign(m, 1);
            ranks.back() = d2 - (m - 1);
        }
        if (std::any_of(ranks.begin(), ranks.end(), [](std::size_t r) { return r == 0; })) {
            fail(where + ".pointer_ranks", "ranks must be positive");
        }
        if (std::accumulate(ranks.begin(), ranks.end(), std::size_t{0}) != d2) {
            fail(where + ".pointer_ranks", "ranks must sum to the pointer dimension");
        }
        a.pointer_ranks = std::move(ranks);
    }
    return a;
}

CouplingSpec parse_coupling(const json& j, std::size_t total) {
    CouplingSpec c;
    if (j.is_string()) {
        const auto kind = j.get<std::string>();
        if (kind == "constructed") c.kind = CouplingKind::constructed;
        else if (kind == "identity") c.kind = CouplingKind::identity;
        else fail("coupling", "unknown coupling '" + kind + "'");
        return c;
    }
    check_keys(j, "coupling", {"matrix"});
    c.kind = CouplingKind::matrix;
    c.rows = parse_vector_list(require(j, "matrix", "coupling"), "coupling.matrix", total);
    if (c.rows.size() != total) fail("coupling.matrix", "expected " + std::to_string(total) + " rows");
    return c;
}

MixtureScenario parse_mixture(const json& j) {
    const std::string where = "mixture";
    check_keys(j, where, {"components", "counts", "purification"});
    MixtureScenario m;
    const json& comps = require(j, "components", where);
    if (!comps.is_array() || comps.empty()) fail(where + ".components", "expected a nonempty list");
    std::size_t dim = 0;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        const std::string w = where + ".components[" + std::to_string(k) + "]";
        check_keys(comps[k], w, {"state", "weight"});
        MixtureComponentSpec c;
        c.state = parse_amplitudes(require(comps[k], "state", w), w + ".state", dim);
        dim = c.state.size();
        c.weight = parse_real(require(comps[k], "weight", w), w + ".weight");
        m.components.push_back(std::move(c));
    }
    if (j.contains("counts")) {
        const json& n = j.at("counts");
        if (!n.is_array()) fail(where + ".counts", "expected a list of integers");
        std::vector<std::uint64_t> counts;
        for (const auto& x : n) counts.push_back(parse_count(x, where + ".counts"));
        m.counts = std::move(counts);
    }
    if (j.contains("purification")) {
        const json& p = j.at("purification");
        if (!(p.is_string() && p.get<std::string>() == "auto")) {
            m.purification = parse_bipartite(p, where + ".purification");
        }
    }
    return m;
}

SamplingSpec parse_sampling(const json& j) {
    const std::string where = "sampling";
    check_keys(j, where, {"samples", "parts", "count_shift"});
    SamplingSpec s;
    s.samples = parse_count(require(j, "samples", where), where + ".samples");
    if (s.samples == 0) fail(where + ".samples", "must be positive");
    if (j.contains("parts")) {
        s.parts = static_cast<std::size_t>(parse_count(j.at("parts"), where + ".parts"));
        if (s.parts == 0) fail(where + ".parts", "must be positive");
    }
    if (j.contains("count_shift")) {
        const json& c = j.at("count_shift");
        if (!c.is_array()) fail(where + ".count_shift", "expected a list of integers");
        std::vector<std::int64_t> shift;
        for (const auto& x : c) {
            if (!x.is_number_integer()) fail(where + ".count_shift", "expected integers");
            shift.push_back(x.get<std::int64_t>());
        }
        s.count_shift = std::move(shift);
    }
    return s;
}

Tolerances parse_tolerances(const json& j, Tolerances base) {
    check_keys(j, "tolerances", {"operator", "norm", "zero_branch", "identity"});
    auto read = [&](const char* key, double& slot) {
        if (!j.contains(key)) return;
        slot = parse_real(j.at(key), std::string("tolerances.") + key);
        if (!(slot > 0.0)) fail(std::string("tolerances.") + key, "must be positive");
    };
    read("operator", base.op);
    read("norm", base.norm);
    read("zero_branch", base.zero_branch);
    read("identity", base.identity);
    return base;
}

Vector to_vector(const Amplitudes& a) {
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i];
    return v;
}

json amplitudes_json(const Amplitudes& a) {
    json out = json::array();
    for (const auto& c : a) out.push_back(complex_to_json(c));
    return out;
}

json vector_list_json(const std::vector<Amplitudes>& list) {
    json out = json::array();
    for (const auto& a : list) out.push_back(amplitudes_json(a));
    return out;
}

json bipartite_json(const BipartiteSpec& b) {
    return json{{"dims", {b.dims.first, b.dims.second}}, {"state", amplitudes_json(b.state)}};
}

std::vector<Vector> to_vectors(const Span& span) {
    std::vector<Vector> out;
    for (const auto& a : span) out.push_back(to_vector(a));
    return out;
}

const FactorDims& require_dims(const Scenario& s) {
    if (!s.dims) throw InputError("scenario: missing 'dims'");
    return *s.dims;
}

}  // namespace

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json amplitudes_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Scenario parse_scenario(const json& j, const Tolerances& base) {
    check_keys(j, "scenario", {"schema", "name", "description", "dims", "observable", "apparatus", "coupling", "inputs",
                               "bipartite", "mixture", "sampling", "seed", "trials", "tolerances"});
    if (j.contains("schema") && j.at("schema") != kScenarioSchema) {
        fail("schema", std::string("expected '") + kScenarioSchema + "'");
    }
    Scenario s;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) fail("name", "expected a string");
        s.name = j.at("name").get<std::string>();
    }
    if (j.contains("description")) {
        if (!j.at("description").is_string()) fail("description", "expected a string");
        s.description = j.at("description").get<std::string>();
    }
    if (j.contains("dims")) s.dims = parse_dims(j.at("dims"), "dims");
    const bool needs_dims = j.contains("observable") || j.contains("apparatus") || j.contains("inputs") ||
                            j.contains("coupling");
    if (needs_dims && !s.dims) fail("dims", "required with observable, apparatus, coupling or inputs");
    if (j.contains("observable")) s.observable = parse_observable(j.at("observable"), s.dims->first);
    if (j.contains("apparatus")) s.apparatus = parse_apparatus(j.at("apparatus"), s.dims->second);
    if (j.contains("coupling")) s.coupling = parse_coupling(j.at("coupling"), s.dims->total());
    if (j.contains("inputs")) s.inputs = parse_vector_list(j.at("inputs"), "inputs", s.dims->first);
    if (j.contains("bipartite")) s.bipartite = parse_bipartite(j.at("bipartite"), "bipartite");
    if (j.contains("mixture")) s.mixture = parse_mixture(j.at("mixture"));
    if (j.contains("sampling")) s.sampling = parse_sampling(j.at("sampling"));
    if (j.contains("seed")) s.seed = parse_count(j.at("seed"), "seed");
    if (j.contains("trials")) s.trials = static_cast<std::size_t>(parse_count(j.at("trials"), "trials"));
    s.tolerances = j.contains("tolerances") ? parse_tolerances(j.at("tolerances"), base) : base;
    return s;
}

json to_json(const Scenario& s) {
    json j;
    j["schema"] = kScenarioSchema;
    j["name"] = s.name;
    if (!s.description.empty()) j["description"] = s.description;
    if (s.dims) j["dims"] = {s.dims->first, s.dims->second};
    if (s.observable) {
        json o;
        o["eigenvalues"] = s.observable->eigenvalues;
        if (s.observable->complete) {
            json basis = json::array();
            for (const auto& span : s.observable->projectors) basis.push_back(amplitudes_json(span.front()));
            o["basis"] = std::move(basis);
        } else {
            json spans = json::array();
            for (const auto& span : s.observable->projectors) spans.push_back(vector_list_json(span));
            o["projectors"] = std::move(spans);
        }
        j["observable"] = std::move(o);
    }
    if (s.apparatus) {
        json a;
        a["ready"] = amplitudes_json(s.apparatus->ready);
        a["pointer_states"] = vector_list_json(s.apparatus->pointer_states);
        a["pointer_eigenvalues"] = s.apparatus->pointer_eigenvalues;
        if (s.apparatus->pointer_projectors) {
            json spans = json::array();
            for (const auto& span : *s.apparatus->pointer_projectors) spans.push_back(vector_list_json(span));
            a["pointer_projectors"] = std::move(spans);
        }
        if (s.apparatus->pointer_ranks) a["pointer_ranks"] = *s.apparatus->pointer_ranks;
        j["apparatus"] = std::move(a);
    }
    if (s.dims) {
        switch (s.coupling.kind) {
            case CouplingKind::constructed: j["coupling"] = "constructed"; break;
            case CouplingKind::identity: j["coupling"] = "identity"; break;
            case CouplingKind::matrix: j["coupling"] = json{{"matrix", vector_list_json(s.coupling.rows)}}; break;
        }
    }
    if (!s.inputs.empty()) j["inputs"] = vector_list_json(s.inputs);
    if (s.bipartite) j["bipartite"] = bipartite_json(*s.bipartite);
    if (s.mixture) {
        json m;
        json comps = json::array();
        for (const auto& c : s.mixture->components) {
            comps.push_back(json{{"state", amplitudes_json(c.state)}, {"weight", c.weight}});
        }
        m["components"] = std::move(comps);
        if (s.mixture->counts) m["counts"] = *s.mixture->counts;
        m["purification"] = s.mixture->purification ? bipartite_json(*s.mixture->purification) : json("auto");
        j["mixture"] = std::move(m);
    }
    if (s.sampling) {
        json sp{{"samples", s.sampling->samples}, {"parts", s.sampling->parts}};
        if (s.sampling->count_shift) sp["count_shift"] = *s.sampling->count_shift;
        j["sampling"] = std::move(sp);
    }
    j["seed"] = s.seed;
    j["trials"] = s.trials;
    j["tolerances"] = json{{"operator", s.tolerances.op},
                           {"norm", s.tolerances.norm},
                           {"zero_branch", s.tolerances.zero_branch},
                           {"identity", s.tolerances.identity}};
    return j;
}

Observable build_observable(const Scenario& s) {
    const FactorDims& dims = require_dims(s);
    if (!s.observable) throw InputError("scenario: missing 'observable'");
    const HilbertSpace space(dims.first, "system");
    std::vector<Projector> projectors;
    for (const auto& span : s.observable->projectors) {
        projectors.push_back(projector_from_span(space, to_vectors(span), s.tolerances.op));
    }
    return spectral_observable(s.observable->eigenvalues, std::move(projectors), s.tolerances);
}

PointerApparatus build_apparatus(const Scenario& s) {
    const FactorDims& dims = require_dims(s);
    if (!s.apparatus) throw InputError("scenario: missing 'apparatus'");
    const ApparatusSpec& a = *s.apparatus;
    const HilbertSpace space(dims.second, "pointer");
    std::vector<StateVector> pointer_states;
    for (const auto& chi : a.pointer_states) pointer_states.push_back(make_state(space, to_vector(chi)));

    std::vector<Projector> projectors;
    if (a.pointer_projectors) {
        for (const auto& span : *a.pointer_projectors) {
            projectors.push_back(projector_from_span(space, to_vectors(span), s.tolerances.op));
        }
    } else {
        // Complete the pointer states to a basis with computational basis
        // vectors, then hand the extras out in order to fill each rank.
        const auto d2 = static_cast<Eigen::Index>(dims.second);
        Matrix basis(d2, 0);
        auto try_add = [&](const Vector& v) {
            Vector w = v;
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index i = 0; i < basis.cols(); ++i) w -= basis.col(i).dot(w) * basis.col(i);
            }
            if (w.norm() <= 1e-8) return false;
            basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
            basis.col(basis.cols() - 1) = w / w.norm();
            return true;
        };
        for (const auto& chi : pointer_states) {
            if (!try_add(chi.amplitudes())) throw InputError("scenario: pointer states are linearly dependent");
        }
        for (Eigen::Index e = 0; e < d2 && basis.cols() < d2; ++e) try_add(StateVector::basis(space, static_cast<std::size_t>(e)).amplitudes());

        Eigen::Index next_extra = static_cast<Eigen::Index>(pointer_states.size());
        for (std::size_t n = 0; n < pointer_states.size(); ++n) {
            std::vector<Vector> span{pointer_states[n].amplitudes()};
            for (std::size_t r = 1; r < (*a.pointer_ranks)[n]; ++r) span.push_back(basis.col(next_extra++));
            projectors.push_back(projector_from_span(space, span, s.tolerances.op));
        }
    }
    Observable pointer = spectral_observable(a.pointer_eigenvalues, std::move(projectors), s.tolerances);
    return PointerApparatus::make(make_state(space, to_vector(a.ready)), std::move(pointer), std::move(pointer_states),
                                  s.tolerances);
}

PremeasurementModel build_model(const Scenario& s) {
    const FactorDims& dims = require_dims(s);
    Observable measured = build_observable(s);
    PointerApparatus apparatus = build_apparatus(s);
    switch (s.coupling.kind) {
        case CouplingKind::constructed:
            return build_premeasurement(measured, apparatus, s.tolerances);
        case CouplingKind::identity:
            return PremeasurementModel::with_coupling(std::move(measured), std::move(apparatus),
                                                      Operator::identity(HilbertSpace(dims.total())), s.tolerances);
        case CouplingKind::matrix: {
            const auto n = static_cast<Eigen::Index>(dims.total());
            Matrix u(n, n);
            for (Eigen::Index r = 0; r < n; ++r) u.row(r) = to_vector(s.coupling.rows[static_cast<std::size_t>(r)]).transpose();
            return PremeasurementModel::with_coupling(std::move(measured), std::move(apparatus),
                                                      Operator(HilbertSpace(dims.total()), std::move(u)), s.tolerances);
        }
    }
    throw InputError("scenario: unknown coupling");
}

std::vector<StateVector> build_inputs(const Scenario& s) {
    const FactorDims& dims = require_dims(s);
    if (s.inputs.empty()) throw InputError("scenario: missing 'inputs'");
    std::vector<StateVector> out;
    const HilbertSpace space(dims.first, "system");
    for (const auto& a : s.inputs) out.push_back(make_state(space, to_vector(a)));
    return out;
}

BipartiteState build_bipartite(const BipartiteSpec& spec) {
    return BipartiteState(make_state(HilbertSpace(spec.dims.total()), to_vector(spec.state)), spec.dims);
}

MixtureSpec build_mixture(const Scenario& s) {
    if (!s.mixture) throw InputError("scenario: missing 'mixture'");
    const std::size_t dim = s.mixture->components.front().state.size();
    if (dim == 0) throw InputError("scenario: mixture states are empty");
    const HilbertSpace space(dim, "system");
    std::vector<MixtureComponent> components;
    for (const auto& c : s.mixture->components) components.push_back({make_state(space, to_vector(c.state)), c.weight});
    return MixtureSpec::make(std::move(components), s.mixture->counts, s.tolerances.identity);
}

}  // namespace bornkit::cli
