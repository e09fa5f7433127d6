// Copyright 2026 The photonchain Authors
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

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cli/commands.h"

namespace {

using photonchain::cli::kExitInvalid;
using photonchain::cli::kExitOk;

// "a.b.c=value" -> {"a":{"b":{"c":value}}}; the value is parsed as JSON
// when possible and kept as a string otherwise.
nlohmann::json set_override(const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw photonchain::cli::ConfigError("--set expects section.key=value, got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        value = text;
    }
    nlohmann::json patch = nlohmann::json::object();
    nlohmann::json *node = &patch;
    size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) {
            throw photonchain::cli::ConfigError("--set: empty key in '" + path + "'");
        }
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
    return patch;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulate and analyze single-emitter photonic GHZ and cluster-state generation."};
    app.require_subcommand(1);
    app.set_version_flag("--version", "photonchain 0.1.0");

    // simulate
    photonchain::cli::SimulateArgs sim;
    std::optional<std::string> kind;
    std::optional<int> n;
    std::optional<int64_t> shots;
    std::optional<int64_t> seed;
    std::optional<int> threads;
    std::optional<double> duration;
    std::optional<std::string> plan;
    std::optional<double> phi;
    std::optional<int> phi_points;
    std::optional<std::string> preset;
    bool conditioned = false;
    std::vector<std::string> sets;
    auto *s = app.add_subcommand("simulate", "Run the protocol engine and write shot records");
    s->add_option("-c,--config", sim.config_path, "JSON run configuration");
    s->add_option("--kind", kind, "Protocol kind: ghz, cluster, custom, rate, coherence, ddscan");
    s->add_option("--n", n, "Number of photons");
    s->add_option("--shots", shots, "Number of shots");
    s->add_option("--seed", seed, "Global seed");
    s->add_option("--threads", threads, "Worker threads (results do not depend on it)");
    s->add_option("--duration", duration, "Simulated wall clock in seconds (rate mode)");
    s->add_option("--plan", plan, "Basis plan: z, x, parity, cluster, equator");
    s->add_option("--phi", phi, "Analyzer phase for the equator plan");
    s->add_option("--phi-points", phi_points, "Phase points of the parity plan");
    s->add_option("--noise", preset, "Noise preset: ideal or calibrated");
    s->add_flag("--condition-on-detection", conditioned, "Skip loss sampling (post-selected statistics only)");
    s->add_option("--set", sets, "Override any config field, e.g. noise.eta0=0.5")->take_all();
    s->add_option("-o,--out", sim.out_dir, "Output directory (overrides $PHOTONCHAIN_OUTPUT_DIR)");
    s->add_flag("-q,--quiet", sim.quiet, "No progress output");

    // analyze
    photonchain::cli::AnalyzeArgs ana;
    auto *a = app.add_subcommand("analyze", "Run estimators over records or rate counts");
    a->add_option("inputs", ana.inputs, "Records files (same configuration) or one rate-counts file")
        ->required();
    a->add_option("-c,--config", ana.config_path, "Abort unless the records match this configuration");
    a->add_option("-e,--estimators", ana.estimators, "Estimators to run (default: all supported by the data)")
        ->delimiter(',');
    a->add_option("--source-efficiency", ana.source_efficiency, "eta0 for the loss-corrected rate curve");
    a->add_option("-o,--out", ana.out_dir, "Output directory (overrides $PHOTONCHAIN_OUTPUT_DIR)");

    // reproduce
    photonchain::cli::ReproduceArgs rep;
    bool no_records = false;
    auto *r = app.add_subcommand("reproduce", "Run the bundled desk-scale configuration of one figure");
    r->add_option("figure", rep.figure, "fig2, fig3, fig4 or edfig3")->required();
    r->add_option("-o,--out", rep.out_dir, "Output root (overrides $PHOTONCHAIN_OUTPUT_DIR)");
    r->add_option("--seed", rep.seed, "Global seed");
    r->add_option("--threads", rep.threads, "Worker threads");
    r->add_option("--scale", rep.scale, "Multiplier for every shot count and the rate duration");
    r->add_flag("--noiseless", rep.noiseless, "Use the ideal noise model instead of the calibrated one");
    r->add_flag("--no-records", no_records, "Write summaries and curves only");
    r->add_flag("-q,--quiet", rep.quiet, "No progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInvalid;
    }

    if (s->parsed()) {
        return photonchain::cli::guarded(std::cerr, [&] {
            auto &o = sim.overrides;
            if (kind) o["protocol"]["kind"] = *kind;
            if (n) o["protocol"]["n"] = *n;
            if (shots) o["execution"]["shots"] = *shots;
            if (seed) o["execution"]["seed"] = *seed;
            if (threads) o["execution"]["threads"] = *threads;
            if (duration) o["execution"]["duration"] = *duration;
            if (conditioned) o["execution"]["condition_on_detection"] = true;
            if (plan) o["measurement"]["plan"] = *plan;
            if (phi) o["measurement"]["phi"] = *phi;
            if (phi_points) o["measurement"]["phi_points"] = *phi_points;
            if (preset) o["noise"]["preset"] = *preset;
            for (const auto &assignment : sets) {
                o.merge_patch(set_override(assignment));
            }
            return photonchain::cli::cmd_simulate(sim, std::cout, std::cerr);
        });
    }
    if (a->parsed()) {
        return photonchain::cli::cmd_analyze(ana, std::cout, std::cerr);
    }
    rep.write_records = !no_records;
    return photonchain::cli::cmd_reproduce(rep, std::cout, std::cerr);
}
