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

#include "cli/summary.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace photonchain::cli {

namespace {

using nlohmann::ordered_json;

bool uniform_setting(const ShotRecord &r, auto pred) {
    return !r.photons.empty() &&
           std::all_of(r.photons.begin(), r.photons.end(), [&](const PhotonRecord &p) { return pred(p.basis); });
}

struct Inventory {
    bool z = false;
    bool x = false;
    std::set<double> phis;
    bool x_first = false;  // XZXZ...
    bool z_first = false;  // ZXZX...
};

Inventory take_inventory(std::span<const ShotRecord> records, int n) {
    Inventory inv;
    const auto xz = alternating_setting(n, true);
    const auto zx = alternating_setting(n, false);
    for (const auto &r : records) {
        if (uniform_setting(r, [](const MeasBasis &b) { return b.is_z(); })) {
            inv.z = true;
            continue;
        }
        if (uniform_setting(r, [&](const MeasBasis &b) { return b == r.photons.front().basis; })) {
            inv.phis.insert(r.photons.front().basis.phi());
            inv.x = inv.x || r.photons.front().basis.is_x();
        }
        if (n >= 2) {
            inv.x_first = inv.x_first || r.in_setting(xz);
            inv.z_first = inv.z_first || r.in_setting(zx);
        } else if (r.photons.front().basis.is_x()) {
            inv.x_first = true;
        }
    }
    return inv;
}

std::string curve_text(const ParityCurve &curve) {
    std::ostringstream os;
    os << "phi\tparity\tstderr\tevents\n";
    for (const auto &pt : curve) {
        os << format_double(pt.phi) << '\t' << format_double(pt.parity.value) << '\t'
           << format_double(pt.parity.std_err) << '\t' << pt.parity.n_events << '\n';
    }
    return os.str();
}

}  // namespace

nlohmann::ordered_json estimate_json(const Estimate &e) {
    return {{"value", e.value}, {"stderr", e.std_err}, {"events", e.n_events}};
}

nlohmann::ordered_json witness_json(const WitnessResult &w) {
    ordered_json j;
    j["bound"] = estimate_json(w.bound);
    j["settings"] = w.settings_used;
    ordered_json comps = ordered_json::array();
    for (const auto &c : w.components) {
        comps.push_back(estimate_json(c));
    }
    j["components"] = comps;
    return j;
}

nlohmann::ordered_json decay_json(const DecayFit &d) {
    ordered_json j;
    j["decay_per_photon"] = d.decay_per_photon;
    j["decay_stderr"] = d.decay_stderr;
    j["intercept"] = d.intercept;
    j["intercept_stderr"] = d.intercept_stderr;
    if (d.crossing_n) {
        j["crossing_n"] = *d.crossing_n;
        j["crossing_stderr"] = d.crossing_stderr;
    } else {
        j["crossing_n"] = nullptr;
    }
    return j;
}

nlohmann::ordered_json summarize_records(const RecordsHeader &header, std::span<const uint64_t> seeds,
                                         std::span<const ShotRecord> records, const AnalysisOptions &options,
                                         std::vector<CurveFile> *curves) {
    const int n = header.n;
    const Inventory inv = take_inventory(records, n);
    const bool is_probe = header.kind == ProtocolKind::kCoherenceProbe;

    std::set<std::string> available;
    if (inv.z) {
        available.insert("populations");
    }
    if (!inv.phis.empty()) {
        available.insert("parity");
    }
    if (inv.phis.size() >= 8) {
        available.insert("coherence");
        if (inv.z) {
            available.insert("fidelity");
        }
    }
    if (inv.x && inv.z) {
        available.insert("ghz_witness");
    }
    if (inv.x_first || inv.z_first) {
        available.insert("stabilizers");
    }
    if (inv.x_first && (inv.z_first || n == 1)) {
        available.insert("cluster_witness");
    }
    if (is_probe && inv.x) {
        available.insert("overlap");
    }

    static const std::map<std::string, std::string> needs = {
        {"populations", "the 'z' basis plan"},
        {"parity", "an equator basis plan ('x', 'equator' or 'parity')"},
        {"coherence", "the 'parity' basis plan with at least 8 phases"},
        {"fidelity", "both the 'z' and the 'parity' basis plans"},
        {"ghz_witness", "both the 'x' and the 'z' basis plans"},
        {"stabilizers", "the 'cluster' basis plan"},
        {"cluster_witness", "the 'cluster' basis plan (both alternating settings)"},
        {"overlap", "coherence-probe records in the 'x' basis plan"},
        {"rate", "a rate-counts file"}};

    std::set<std::string> wanted;
    if (options.estimators.empty()) {
        wanted = available;
    } else {
        for (const auto &e : options.estimators) {
            if (!needs.contains(e)) {
                throw ConfigError("unknown estimator '" + e + "'");
            }
            if (!available.contains(e)) {
                throw ConfigError("estimator '" + e + "' needs " + needs.at(e));
            }
            wanted.insert(e);
        }
    }

    ordered_json s;
    s["config_hash"] = header.config_hash;
    s["seeds"] = std::vector<uint64_t>(seeds.begin(), seeds.end());
    s["kind"] = to_string(header.kind);
    s["n"] = n;

    uint64_t void_shots = 0;
    uint64_t full = 0;
    uint64_t attempts = 0;
    for (const auto &r : records) {
        void_shots += r.void_shot ? 1 : 0;
        full += r.all_detected() ? 1 : 0;
        attempts += static_cast<uint64_t>(r.first_photon_attempts);
    }
    const auto shots = static_cast<uint64_t>(records.size());
    s["events"] = {{"shots", shots},
                   {"void_shots", void_shots},
                   {"fully_detected", full},
                   {"mean_first_attempts", shots ? static_cast<double>(attempts) / static_cast<double>(shots) : 0.0}};
    const double duration = static_cast<double>(shots) * header.run_period;
    s["wall_clock"] = {{"run_period", header.run_period},
                       {"duration", duration},
                       {"fully_detected_per_minute", duration > 0 ? 60.0 * static_cast<double>(full) / duration : 0.0}};

    std::optional<Estimate> pop;
    if (wanted.contains("populations")) {
        pop = populations(records, n);
        s["populations"] = estimate_json(*pop);
    }
    ParityCurve curve;
    if (wanted.contains("parity") || wanted.contains("coherence") || wanted.contains("fidelity")) {
        curve = parity_curve(records);
    }
    if (wanted.contains("parity")) {
        ordered_json arr = ordered_json::array();
        for (const auto &pt : curve) {
            ordered_json e = estimate_json(pt.parity);
            arr.push_back({{"phi", pt.phi}, {"value", e["value"]}, {"stderr", e["stderr"]}, {"events", e["events"]}});
        }
        s["parity"] = arr;
        if (curves) {
            curves->push_back({"parity_curve.tsv", curve_text(curve)});
        }
    }
    if (wanted.contains("coherence") || wanted.contains("fidelity")) {
        const CoherenceFit fit = fit_coherence(curve, n);
        s["coherence"] = {{"amplitude", estimate_json(fit.amplitude)},
                          {"offset", fit.offset},
                          {"offset_stderr", fit.offset_stderr}};
        if (wanted.contains("fidelity")) {
            s["fidelity"] = estimate_json(ghz_fidelity(*pop, fit.amplitude));
        }
    }
    if (wanted.contains("ghz_witness")) {
        s["ghz_witness"] = witness_json(ghz_witness(records, records));
    }
    if (wanted.contains("stabilizers")) {
        ordered_json arr = ordered_json::array();
        for (const auto &e : stabilizers(records, n)) {
            arr.push_back(estimate_json(e));
        }
        s["stabilizers"] = arr;
    }
    if (wanted.contains("cluster_witness")) {
        const WitnessResult w = cluster_witness(records, n);
        s["cluster_witness"] = witness_json(w);
        try {
            s["cluster_witness_from_stabilizers"] = witness_json(cluster_witness_from_stabilizers(w.components));
        } catch (const InsufficientDataError &) {
            s["cluster_witness_from_stabilizers"] = nullptr;
        }
    }
    if (wanted.contains("overlap")) {
        s["overlap"] = estimate_json(coherence_overlap(records));
    }
    return s;
}

nlohmann::ordered_json summarize_counts(const CountsFile &file, const AnalysisOptions &options,
                                        std::vector<CurveFile> *curves) {
    for (const auto &e : options.estimators) {
        if (e != "rate") {
            throw ConfigError("estimator '" + e + "' needs shot records, not a rate-counts file");
        }
    }
    const RateCounts &c = file.counts;
    const RateFit fit = rate_fit(c.counts, c.duration, options.source_efficiency);
    ordered_json s;
    s["config_hash"] = file.header.config_hash;
    s["seeds"] = {file.header.seed};
    s["kind"] = to_string(file.header.kind);
    s["n"] = file.header.n;
    s["wall_clock"] = {{"run_period", c.period}, {"duration", c.duration}, {"runs", c.runs}};
    s["eta"] = estimate_json(fit.eta);
    s["prefactor"] = fit.prefactor;
    s["source_efficiency"] = options.source_efficiency;
    s["dropped"] = fit.dropped;
    ordered_json pts = ordered_json::array();
    std::ostringstream os;
    os << "n\tcounts\trate\trate_stderr\tper_minute\tfitted_rate\tloss_corrected_rate\n";
    for (const auto &p : fit.points) {
        pts.push_back({{"n", p.n},
                       {"counts", p.counts},
                       {"rate", p.rate},
                       {"rate_stderr", p.rate_stderr},
                       {"per_minute", 60.0 * p.rate},
                       {"fitted_rate", p.fitted_rate},
                       {"loss_corrected_rate", p.loss_corrected_rate}});
        os << p.n << '\t' << p.counts << '\t' << format_double(p.rate) << '\t' << format_double(p.rate_stderr)
           << '\t' << format_double(60.0 * p.rate) << '\t' << format_double(p.fitted_rate) << '\t'
           << format_double(p.loss_corrected_rate) << '\n';
    }
    s["rates"] = pts;
    if (curves) {
        curves->push_back({"rate_curve.tsv", os.str()});
    }
    return s;
}

std::string dump_summary(const nlohmann::ordered_json &summary) { return summary.dump(2) + "\n"; }

}  // namespace photonchain::cli
