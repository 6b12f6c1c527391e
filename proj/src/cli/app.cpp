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

#include "bornkit/cli/app.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "bornkit/cli/report.hpp"

namespace bornkit::cli {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

Tolerances environment_tolerances() {
    Tolerances tol;
    if (const char* env = std::getenv(kToleranceEnv); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const double value = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(value > 0.0)) {
            throw InputError(std::string(kToleranceEnv) + " must be a positive number");
        }
        tol.op = value;
    }
    return tol;
}

json envelope(const char* command, const Scenario& s) {
    return json{{"schema", kReportSchema}, {"command", command}, {"scenario", to_json(s)}};
}

std::vector<double> sampling_distribution(const std::vector<double>& derived, double zero) {
    std::vector<double> p = derived;
    double total = 0.0;
    for (double& x : p) {
        if (x < zero) x = 0.0;
        total += x;
    }
    if (!(total > 0.0)) throw InputError("sample: derived probabilities vanish");
    for (double& x : p) x /= total;
    return p;
}

}  // namespace

Scenario resolve_scenario(const json& file, const RunOptions& options) {
    Scenario s = parse_scenario(file, environment_tolerances());
    if (options.tolerance) {
        if (!(*options.tolerance > 0.0)) throw InputError("--tolerance must be positive");
        s.tolerances.op = *options.tolerance;
    }
    if (options.trials) s.trials = *options.trials;
    if (options.seed) s.seed = *options.seed;
    return s;
}

CommandResult cmd_schmidt(const Scenario& s) {
    if (!s.bipartite) throw InputError("schmidt: scenario has no 'bipartite' state");
    const BipartiteState psi = build_bipartite(*s.bipartite);
    const SchmidtForm form = schmidt_decompose(psi, s.tolerances);
    const double round_trip = (reconstruct(form).amplitudes() - psi.amplitudes()).norm();

    CommandResult result{envelope("schmidt", s)};
    json section = to_json(form);
    section["round_trip_residual"] = round_trip;
    const bool pass = round_trip <= s.tolerances.op;
    section["pass"] = pass;
    result.report["schmidt"] = std::move(section);
    result.report["pass"] = pass;
    result.exit_code = pass ? kPass : kVerificationFailure;
    return result;
}

CommandResult cmd_derive(const Scenario& s, bool fail_fast) {
    const PremeasurementModel model = build_model(s);
    const std::vector<StateVector> inputs = build_inputs(s);
    CommandResult result{envelope("derive", s)};
    json derivations = json::array();
    bool pass = true;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const ProbabilityReport report = derive_probabilities(model, inputs[i], s.seed, s.tolerances);
        json d = to_json(report);
        d["input"] = i;
        derivations.push_back(std::move(d));
        if (!report.flags.all()) {
            pass = false;
            if (fail_fast) break;
        }
    }
    result.report["derivations"] = std::move(derivations);
    result.report["pass"] = pass;
    result.exit_code = pass ? kPass : kVerificationFailure;
    return result;
}

CommandResult cmd_mixtures(const Scenario& s) {
    const MixtureSpec spec = build_mixture(s);
    const bool given = s.mixture->purification.has_value();
    const BipartiteState psi =
        given ? build_bipartite(*s.mixture->purification) : canonical_purification(mix(spec, s.tolerances));
    const EquivalenceReport eq = proper_improper_equivalence(spec, psi, s.trials, s.seed, s.tolerances);

    CommandResult result{envelope("mixtures", s)};
    json section = to_json(eq);
    section["purification"] = given ? "given" : "auto";
    const bool pass = eq.max_residual <= s.tolerances.op;
    section["pass"] = pass;
    result.report["mixtures"] = std::move(section);
    result.report["pass"] = pass;
    result.exit_code = pass ? kPass : kVerificationFailure;
    return result;
}

CommandResult cmd_sample(const Scenario& s, bool fail_fast) {
    if (!s.sampling) throw InputError("sample: scenario has no 'sampling' section");
    const PremeasurementModel model = build_model(s);
    const std::vector<StateVector> inputs = build_inputs(s);
    CommandResult result{envelope("sample", s)};
    json derivations = json::array();
    json sampling = json::array();
    bool pass = true;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const ProbabilityReport report = derive_probabilities(model, inputs[i], s.seed, s.tolerances);
        json d = to_json(report);
        d["input"] = i;
        derivations.push_back(std::move(d));

        const auto p = sampling_distribution(report.derived(), s.tolerances.zero_branch);
        SampleRun run = sample_outcomes(p, s.sampling->samples, s.seed, s.sampling->parts);
        if (s.sampling->count_shift) {
            const auto& shift = *s.sampling->count_shift;
            if (shift.size() != run.counts.size()) throw InputError("sample: count_shift needs one entry per outcome");
            for (std::size_t k = 0; k < shift.size(); ++k) {
                const auto shifted = static_cast<std::int64_t>(run.counts[k]) + shift[k];
                if (shifted < 0) throw InputError("sample: count_shift drives a count negative");
                run.counts[k] = static_cast<std::uint64_t>(shifted);
            }
        }
        const FrequencyReport check = frequency_check(run);
        json entry = to_json(run, check);
        entry["input"] = i;
        sampling.push_back(std::move(entry));

        if (!report.flags.all() || !check.pass) {
            pass = false;
            if (fail_fast) break;
        }
    }
    result.report["derivations"] = std::move(derivations);
    result.report["sampling"] = std::move(sampling);
    result.report["pass"] = pass;
    result.exit_code = pass ? kPass : kVerificationFailure;
    return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constructive Born-rule derivation and audit for finite-dimensional premeasurements", "bornkit"};
    app.require_subcommand(1);

    RunOptions options;
    std::string format = "structured";
    std::string path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("scenario", path, "Scenario file (JSON)")->required();
        sub->add_option("--tolerance", options.tolerance, "Operator-identity tolerance (default 1e-10)");
        sub->add_option("--trials", options.trials, "Random trials for mixture equivalence");
        sub->add_option("--seed", options.seed, "Seed for every random draw");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "structured"}));
        sub->add_flag("--fail-fast", options.fail_fast, "Stop at the first failing input");
    };
    CLI::App* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of a bipartite state");
    CLI::App* derive = app.add_subcommand("derive", "Run the full derivation pipeline");
    CLI::App* mixtures = app.add_subcommand("mixtures", "Compare proper and improper mixtures");
    CLI::App* sample = app.add_subcommand("sample", "Derive, then sample outcome frequencies");
    for (CLI::App* sub : {schmidt, derive, mixtures, sample}) add_common(sub);
    CLI::App* report = app.add_subcommand("report", "Pretty-print a structured report");
    report->add_option("report", path, "Structured report file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kInputError;
    }

    try {
        if (report->parsed()) {
            render_text(read_json_file(path), out);
            return kPass;
        }
        const Scenario s = resolve_scenario(read_json_file(path), options);
        CommandResult result;
        if (schmidt->parsed()) result = cmd_schmidt(s);
        else if (derive->parsed()) result = cmd_derive(s, options.fail_fast);
        else if (mixtures->parsed()) result = cmd_mixtures(s);
        else result = cmd_sample(s, options.fail_fast);

        if (format == "text") render_text(result.report, out);
        else out << dump_report(result.report);
        return result.exit_code;
    } catch (const InputError& e) {
        err << "bornkit: input error: " << e.what() << "\n";
        return kInputError;
    } catch (const json::exception& e) {
        err << "bornkit: input error: " << e.what() << "\n";
        return kInputError;
    } catch (const VerificationError& e) {
        err << "bornkit: verification failure: " << e.what() << "\n";
        return kVerificationFailure;
    }
}

}  // namespace bornkit::cli
