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

#include "bornkit/cli/report.hpp"

#include <cmath>
#include <iomanip>

#include "bornkit/cli/scenario.hpp"

namespace bornkit::cli {

using nlohmann::json;

namespace {

// Non-finite residuals mark a check that could not be evaluated.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json numbers(const std::vector<double>& xs) {
    json out = json::array();
    for (double x : xs) out.push_back(number(x));
    return out;
}

json columns(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(amplitudes_to_json(m.col(c)));
    return out;
}

std::string fmt(const json& x) {
    if (x.is_null()) return "n/a";
    if (x.is_number_float()) {
        std::ostringstream os;
        os << std::setprecision(10) << x.get<double>();
        return os.str();
    }
    return x.dump();
}

std::string list(const json& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += fmt(xs[i]);
    }
    return s + "]";
}

const char* verdict(const json& pass) { return pass.is_boolean() && pass.get<bool>() ? "PASS" : "FAIL"; }

void render_derivation(const json& d, std::ostream& out) {
    out << "input " << d.value("input", 0) << ": " << verdict(d.at("pass")) << "\n";
    out << "  derived    " << list(d.at("derived")) << "\n";
    out << "  oracle     " << list(d.at("oracle")) << "\n";
    out << "  flags     ";
    for (const auto& [name, value] : d.at("flags").items()) out << " " << name << "=" << (value.get<bool>() ? "ok" : "FAIL");
    out << "\n";
    for (const auto& o : d.at("outcomes")) {
        out << "  outcome " << o.at("outcome").get<std::size_t>();
        if (o.at("omitted").get<bool>()) {
            out << " (omitted)";
        } else {
            out << " weight=" << fmt(o.at("branch_weight")) << " schmidt_terms=" << o.at("schmidt_detail").size()
                << " complement_rank=" << o.at("complement_rank").get<std::size_t>()
                << " complement_residual=" << fmt(o.at("complement_residual"));
        }
        out << "\n";
    }
    out << "  calibration max residual " << fmt(d.at("calibration").at("max_residual")) << "\n";
    out << "  biorthogonality " << fmt(d.at("biorthogonality").at("first")) << " / "
        << fmt(d.at("biorthogonality").at("second")) << "\n";
}

}  // namespace

json to_json(const SchmidtForm& form) {
    return json{{"dims", {form.dims().first, form.dims().second}},
                {"coefficients", std::vector<double>(form.coefficients().begin(), form.coefficients().end())},
                {"basis1", columns(form.basis1())},
                {"basis2", columns(form.basis2())},
                {"probabilities", schmidt_probabilities(form)}};
}

json to_json(const ProbabilityReport& r) {
    json outcomes = json::array();
    for (const auto& o : r.outcomes) {
        json detail = json::array();
        for (const auto& c : o.schmidt_detail) {
            detail.push_back(json{{"branch_share", c.branch_share}, {"probability", c.probability}});
        }
        outcomes.push_back(json{{"outcome", o.outcome},
                                {"omitted", o.omitted},
                                {"branch_weight", o.branch_weight},
                                {"derived_probability", o.derived_probability},
                                {"oracle_probability", o.oracle_probability},
                                {"schmidt_detail", std::move(detail)},
                                {"pointer_rank", o.pointer_rank},
                                {"complement_rank", o.complement_rank},
                                {"complement_residual", number(o.complement_residual)},
                                {"sublemma_residual", number(o.sublemma_residual)},
                                {"additivity_residual", number(o.additivity_residual)}});
    }
    json calibration = json::array();
    for (const auto& c : r.calibration.outcomes) {
        calibration.push_back(
            json{{"outcome", c.outcome}, {"max_residual", c.max_residual}, {"vectors_checked", c.vectors_checked}});
    }
    json nondemolition = json::array();
    for (const auto& b : r.nondemolition.branches) {
        nondemolition.push_back(json{{"outcome", b.outcome},
                                     {"measured_residual", b.measured_residual},
                                     {"pointer_residual", b.pointer_residual}});
    }
    json norm_law = json::array();
    for (const auto& e : r.norm_law.outcomes) {
        norm_law.push_back(json{{"outcome", e.outcome},
                                {"omitted", e.omitted},
                                {"weight", e.weight},
                                {"oracle", e.oracle},
                                {"residual", e.residual}});
    }
    const AuditFlags& f = r.flags;
    return json{{"derived", r.derived()},
                {"oracle", r.oracle()},
                {"outcomes", std::move(outcomes)},
                {"flags",
                 {{"cc_ok", f.cc_ok},
                  {"nondemolition_ok", f.nondemolition_ok},
                  {"norm_law_ok", f.norm_law_ok},
                  {"biorthogonality_ok", f.biorthogonality_ok},
                  {"sublemma_ok", f.sublemma_ok},
                  {"complement_ok", f.complement_ok},
                  {"additivity_ok", f.additivity_ok},
                  {"prc_ok", f.prc_ok}}},
                {"biorthogonality",
                 {{"first", r.biorthogonality_first},
                  {"second", r.biorthogonality_second},
                  {"reconstruction", r.reconstruction_residual}}},
                {"calibration",
                 {{"passed", r.calibration.passed},
                  {"max_residual", r.calibration.max_residual()},
                  {"outcomes", std::move(calibration)}}},
                {"nondemolition", {{"passed", r.nondemolition.passed}, {"branches", std::move(nondemolition)}}},
                {"norm_law", {{"passed", r.norm_law.passed}, {"outcomes", std::move(norm_law)}}},
                {"prc", {{"passed", f.prc_ok}, {"residuals", numbers(r.prc_residuals)}}},
                {"pass", f.all()}};
}

json to_json(const EquivalenceReport& r) {
    return json{{"trials", r.trials}, {"state_residual", r.state_residual}, {"max_residual", r.max_residual}};
}

json to_json(const SampleRun& run, const FrequencyReport& check) {
    json z = json::array();
    for (const auto& x : check.z_scores) z.push_back(x ? json(*x) : json(nullptr));
    return json{{"probabilities", run.probabilities},
                {"samples", run.sample_count},
                {"seed", run.seed},
                {"counts", run.counts},
                {"z_scores", std::move(z)},
                {"pass", check.pass}};
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

void render_text(const json& report, std::ostream& out) {
    out << "bornkit " << report.value("command", std::string("?")) << " report";
    if (report.contains("scenario") && report.at("scenario").contains("name")) {
        out << " for '" << report.at("scenario").at("name").get<std::string>() << "'";
    }
    out << " (" << report.value("schema", std::string("?")) << ")\n";

    if (report.contains("schmidt")) {
        const json& s = report.at("schmidt");
        out << "schmidt coefficients " << list(s.at("coefficients")) << "\n";
        out << "probabilities        " << list(s.at("probabilities")) << "\n";
        out << "round-trip residual  " << fmt(s.at("round_trip_residual")) << "\n";
    }
    if (report.contains("derivations")) {
        for (const auto& d : report.at("derivations")) render_derivation(d, out);
    }
    if (report.contains("mixtures")) {
        const json& m = report.at("mixtures");
        out << "mixtures: " << verdict(m.at("pass")) << " trials=" << m.at("trials").get<std::size_t>()
            << " max_residual=" << fmt(m.at("max_residual")) << " state_residual=" << fmt(m.at("state_residual"))
            << "\n";
    }
    if (report.contains("sampling")) {
        for (const auto& s : report.at("sampling")) {
            out << "sampling input " << s.value("input", 0) << ": " << verdict(s.at("pass"))
                << " counts=" << list(s.at("counts")) << " z=" << list(s.at("z_scores")) << "\n";
        }
    }
    out << "overall: " << verdict(report.at("pass")) << "\n";
}

}  // namespace bornkit::cli
