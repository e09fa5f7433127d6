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

#include "cli/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace photonchain::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// A JSON object whose keys must all be consumed.
class Section {
   public:
    Section(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw ConfigError(where() + "expected an object");
        }
    }

    bool has(const std::string &key) const { return obj_.contains(key); }

    const json &raw(const std::string &key) {
        seen_.insert(key);
        return obj_.at(key);
    }

    double number(const std::string &key, double fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json &v = raw(key);
        if (!v.is_number()) {
            throw ConfigError(field(key) + "expected a number");
        }
        return v.get<double>();
    }

    int64_t integer(const std::string &key, int64_t fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json &v = raw(key);
        if (!v.is_number_integer()) {
            throw ConfigError(field(key) + "expected an integer");
        }
        return v.get<int64_t>();
    }

    bool boolean(const std::string &key, bool fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json &v = raw(key);
        if (!v.is_boolean()) {
            throw ConfigError(field(key) + "expected true or false");
        }
        return v.get<bool>();
    }

    std::string string(const std::string &key, const std::string &fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json &v = raw(key);
        if (!v.is_string()) {
            throw ConfigError(field(key) + "expected a string");
        }
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string &key) {
        std::vector<double> out;
        if (!has(key)) {
            return out;
        }
        const json &v = raw(key);
        if (!v.is_array()) {
            throw ConfigError(field(key) + "expected an array of numbers");
        }
        for (const auto &x : v) {
            if (!x.is_number()) {
                throw ConfigError(field(key) + "expected an array of numbers");
            }
            out.push_back(x.get<double>());
        }
        return out;
    }

    Section child(const std::string &key) { return Section(raw(key), path_.empty() ? key : path_ + "." + key); }

    void finish() const {
        for (const auto &[key, value] : obj_.items()) {
            if (!seen_.contains(key)) {
                throw ConfigError(field(key) + "unknown key");
            }
        }
    }

    std::string field(const std::string &key) const { return (path_.empty() ? key : path_ + "." + key) + ": "; }

   private:
    std::string where() const { return path_.empty() ? "config: " : path_ + ": "; }

    const json &obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void parse_timings(Section s, TimingTable &t) {
    t.pump = s.number("pump", t.pump);
    t.vstirap_control = s.number("vstirap_control", t.vstirap_control);
    t.photon_fwhm = s.number("photon_fwhm", t.photon_fwhm);
    t.pi_11_to_20 = s.number("pi_11_to_20", t.pi_11_to_20);
    t.qubit_gate_total = s.number("qubit_gate_total", t.qubit_gate_total);
    t.transfer_to_f2_each = s.number("transfer_to_f2_each", t.transfer_to_f2_each);
    t.closing_transfer = s.number("closing_transfer", t.closing_transfer);
    t.cycle_ghz = s.number("cycle_ghz", t.cycle_ghz);
    t.cycle_cluster = s.number("cycle_cluster", t.cycle_cluster);
    t.overhead = s.number("overhead", t.overhead);
    s.finish();
}

void parse_zeeman(Section s, ZeemanModel &z) {
    const double f = s.number("larmor_frequency", z.larmor_angular / (2.0 * std::numbers::pi));
    z.larmor_angular = 2.0 * std::numbers::pi * f;
    z.g_f1 = s.number("g_f1", z.g_f1);
    z.g_f2 = s.number("g_f2", z.g_f2);
    s.finish();
    if (!(f > 0.0)) {
        throw ConfigError("protocol.zeeman.larmor_frequency: must be positive");
    }
}

ProtocolConfig parse_protocol(Section s) {
    if (!s.has("kind")) {
        throw ConfigError("protocol.kind: required");
    }
    const std::string kind_name = s.string("kind", "");
    ProtocolKind kind;
    try {
        kind = parse_protocol_kind(kind_name);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("protocol.kind: ") + e.what());
    }
    ProtocolConfig c;
    switch (kind) {
        case ProtocolKind::kGhz:
            c = ProtocolConfig::ghz(static_cast<int>(s.integer("n", 2)));
            break;
        case ProtocolKind::kCluster:
            c = ProtocolConfig::cluster(static_cast<int>(s.integer("n", 2)));
            break;
        case ProtocolKind::kCustom: {
            const auto angles = s.numbers("rotation_angles");
            const auto n = s.integer("n", static_cast<int64_t>(angles.size()) + 1);
            if (n != static_cast<int64_t>(angles.size()) + 1) {
                throw ConfigError("protocol.rotation_angles: need n - 1 angles");
            }
            c = ProtocolConfig::custom(angles);
            break;
        }
        case ProtocolKind::kRateBenchmark:
            c = ProtocolConfig::rate_benchmark(static_cast<int>(s.integer("n", 14)));
            break;
        case ProtocolKind::kCoherenceProbe:
            c = ProtocolConfig::coherence_probe(s.number("probe_delay", 0.0));
            c.n_photons = static_cast<int>(s.integer("n", 2));
            break;
        case ProtocolKind::kDdScan:
            c = ProtocolConfig::dd_scan(s.number("dd_tau", 0.0));
            c.n_photons = static_cast<int>(s.integer("n", 6));
            c.dd_cycle = s.number("dd_cycle", c.dd_cycle);
            break;
    }
    if (kind != ProtocolKind::kCustom && s.has("rotation_angles")) {
        throw ConfigError("protocol.rotation_angles: only valid for kind 'custom'");
    }
    if (kind != ProtocolKind::kCoherenceProbe && s.has("probe_delay")) {
        throw ConfigError("protocol.probe_delay: only valid for kind 'coherence'");
    }
    if (kind != ProtocolKind::kDdScan && (s.has("dd_tau") || s.has("dd_cycle"))) {
        throw ConfigError("protocol.dd_tau: only valid for kind 'ddscan'");
    }
    c.max_first_attempts = static_cast<int>(s.integer("max_first_attempts", c.max_first_attempts));
    c.repetition_period = s.number("repetition_period", c.repetition_period);
    c.frame_phases = s.numbers("frame_phases");
    if (s.has("timings")) {
        parse_timings(s.child("timings"), c.timings);
    }
    if (s.has("zeeman")) {
        parse_zeeman(s.child("zeeman"), c.zeeman);
    }
    s.finish();
    try {
        c.validate();
    } catch (const std::exception &e) {
        throw ConfigError(std::string("protocol: ") + e.what());
    }
    return c;
}

NoiseConfig parse_noise(Section s) {
    const std::string preset = s.string("preset", "ideal");
    NoiseConfig n;
    if (preset == "calibrated") {
        n = NoiseConfig::calibrated();
    } else if (preset != "ideal") {
        throw ConfigError("noise.preset: expected 'ideal' or 'calibrated'");
    }
    n.eta0 = s.number("eta0", n.eta0);
    if (s.has("eta") && s.has("eta_d")) {
        throw ConfigError("noise.eta: give either eta or eta_d, not both");
    }
    if (s.has("detection_chain")) {
        const json &chain = s.raw("detection_chain");
        if (!chain.is_array()) {
            throw ConfigError("noise.detection_chain: expected an array");
        }
        double product = 1.0;
        for (size_t i = 0; i < chain.size(); ++i) {
            Section stage(chain[i], "noise.detection_chain[" + std::to_string(i) + "]");
            const std::string name = stage.string("name", "stage" + std::to_string(i));
            const double eff = stage.number("efficiency", 1.0);
            stage.finish();
            n.detection_chain.push_back({name, eff});
            product *= eff;
        }
        n.eta_d = product;
    }
    if (s.has("eta")) {
        const double eta = s.number("eta", 1.0);
        if (!(n.eta0 > 0.0)) {
            throw ConfigError("noise.eta: needs a positive eta0");
        }
        n.eta_d = eta / n.eta0;
    }
    n.eta_d = s.number("eta_d", n.eta_d);
    if (s.has("raman_sigma") && s.has("rotation_infidelity")) {
        throw ConfigError("noise.rotation_infidelity: give either raman_sigma or rotation_infidelity, not both");
    }
    n.raman_sigma = s.number("raman_sigma", n.raman_sigma);
    if (s.has("rotation_infidelity")) {
        const double p = s.number("rotation_infidelity", 0.0);
        try {
            n.raman_sigma = raman_sigma_for_infidelity(p);
        } catch (const std::exception &e) {
            throw ConfigError(std::string("noise.rotation_infidelity: ") + e.what());
        }
    }
    n.closing_scatter_p = s.number("closing_scatter_p", n.closing_scatter_p);
    if (s.has("b_sigma") && s.has("coherence_time")) {
        throw ConfigError("noise.coherence_time: give either b_sigma or coherence_time, not both");
    }
    n.b_sigma = s.number("b_sigma", n.b_sigma);
    if (s.has("coherence_time")) {
        try {
            n.b_sigma = calibrate_field(s.number("coherence_time", 0.0));
        } catch (const std::exception &e) {
            throw ConfigError(std::string("noise.coherence_time: ") + e.what());
        }
    }
    const std::string model = s.string("b_model", n.b_model == FieldModel::kQuasiStatic ? "quasi-static" : "per-cycle");
    if (model == "quasi-static") {
        n.b_model = FieldModel::kQuasiStatic;
    } else if (model == "per-cycle") {
        n.b_model = FieldModel::kPerCycle;
    } else {
        throw ConfigError("noise.b_model: expected 'quasi-static' or 'per-cycle'");
    }
    s.finish();
    try {
        n.validate();
    } catch (const std::exception &e) {
        throw ConfigError(std::string("noise: ") + e.what());
    }
    return n;
}

std::string default_plan(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::kCluster:
            return "cluster";
        case ProtocolKind::kCoherenceProbe:
            return "x";
        case ProtocolKind::kDdScan:
            return "parity";
        default:
            return "z";
    }
}

MeasurementPlan parse_measurement(Section s, ProtocolKind kind) {
    MeasurementPlan m;
    m.plan = s.string("plan", default_plan(kind));
    m.phi = s.number("phi", 0.0);
    m.phi_points = static_cast<int>(s.integer("phi_points", m.phi_points));
    s.finish();
    static const std::set<std::string> plans = {"z", "x", "parity", "cluster", "equator"};
    if (!plans.contains(m.plan)) {
        throw ConfigError("measurement.plan: expected one of z, x, parity, cluster, equator");
    }
    if (m.plan == "parity" && m.phi_points < 2) {
        throw ConfigError("measurement.phi_points: need at least 2");
    }
    if (m.plan == "equator" && !(m.phi >= 0.0 && m.phi <= std::numbers::pi)) {
        throw ConfigError("measurement.phi: must lie in [0, pi]");
    }
    return m;
}

Execution parse_execution(Section s) {
    Execution e;
    const int64_t shots = s.integer("shots", static_cast<int64_t>(e.shots));
    const int64_t seed = s.integer("seed", static_cast<int64_t>(e.seed));
    e.threads = static_cast<int>(s.integer("threads", e.threads));
    e.duration = s.number("duration", e.duration);
    e.condition_on_detection = s.boolean("condition_on_detection", e.condition_on_detection);
    s.finish();
    if (shots < 1) {
        throw ConfigError("execution.shots: must be at least 1");
    }
    if (seed < 0) {
        throw ConfigError("execution.seed: must be non-negative");
    }
    if (e.threads < 1) {
        throw ConfigError("execution.threads: must be at least 1");
    }
    if (!(e.duration > 0.0)) {
        throw ConfigError("execution.duration: must be positive");
    }
    e.shots = static_cast<uint64_t>(shots);
    e.seed = static_cast<uint64_t>(seed);
    return e;
}

OutputSpec parse_output(Section s) {
    OutputSpec o;
    o.dir = s.string("dir", o.dir);
    o.records = s.string("records", o.records);
    o.summary = s.string("summary", o.summary);
    o.counts = s.string("counts", o.counts);
    s.finish();
    return o;
}

ordered_json protocol_json(const ProtocolConfig &c) {
    ordered_json p;
    p["kind"] = to_string(c.kind);
    p["n"] = c.n_photons;
    if (c.kind == ProtocolKind::kCustom) {
        p["rotation_angles"] = c.rotation_angles;
    }
    if (c.kind == ProtocolKind::kCoherenceProbe) {
        p["probe_delay"] = c.probe_delay;
    }
    if (c.kind == ProtocolKind::kDdScan) {
        p["dd_tau"] = c.dd_tau;
        p["dd_cycle"] = c.dd_cycle;
    }
    p["max_first_attempts"] = c.max_first_attempts;
    p["repetition_period"] = c.repetition_period;
    p["frame_phases"] = c.frame_phases;
    const TimingTable &t = c.timings;
    p["timings"] = {{"pump", t.pump},
                    {"vstirap_control", t.vstirap_control},
                    {"photon_fwhm", t.photon_fwhm},
                    {"pi_11_to_20", t.pi_11_to_20},
                    {"qubit_gate_total", t.qubit_gate_total},
                    {"transfer_to_f2_each", t.transfer_to_f2_each},
                    {"closing_transfer", t.closing_transfer},
                    {"cycle_ghz", t.cycle_ghz},
                    {"cycle_cluster", t.cycle_cluster},
                    {"overhead", t.overhead}};
    p["zeeman"] = {{"larmor_frequency", c.zeeman.larmor_angular / (2.0 * std::numbers::pi)},
                   {"g_f1", c.zeeman.g_f1},
                   {"g_f2", c.zeeman.g_f2}};
    return p;
}

ordered_json noise_json(const NoiseConfig &n) {
    ordered_json j;
    j["eta0"] = n.eta0;
    if (n.detection_chain.empty()) {
        j["eta_d"] = n.eta_d;
    } else {
        ordered_json chain = ordered_json::array();
        for (const auto &s : n.detection_chain) {
            chain.push_back({{"name", s.name}, {"efficiency", s.efficiency}});
        }
        j["detection_chain"] = chain;
        j["eta_d"] = n.eta_d;
    }
    j["raman_sigma"] = n.raman_sigma;
    j["closing_scatter_p"] = n.closing_scatter_p;
    j["b_sigma"] = n.b_sigma;
    j["b_model"] = n.b_model == FieldModel::kQuasiStatic ? "quasi-static" : "per-cycle";
    return j;
}

ordered_json measurement_json(const MeasurementPlan &m) {
    ordered_json j;
    j["plan"] = m.plan;
    if (m.plan == "equator") {
        j["phi"] = m.phi;
    }
    if (m.plan == "parity") {
        j["phi_points"] = m.phi_points;
    }
    return j;
}

}  // namespace

BasisPlan MeasurementPlan::basis_plan(int n) const {
    if (plan == "z") {
        return BasisPlan::uniform(n, MeasBasis::z());
    }
    if (plan == "x") {
        return BasisPlan::uniform(n, MeasBasis::x());
    }
    if (plan == "equator") {
        return BasisPlan::uniform(n, MeasBasis::equator(phi));
    }
    if (plan == "parity") {
        return BasisPlan::parity_grid(n, phi_points);
    }
    return BasisPlan::cluster_settings(n);
}

RunConfig parse_config(const nlohmann::json &doc) {
    Section root(doc, "");
    if (!root.has("protocol")) {
        throw ConfigError("protocol: required section");
    }
    RunConfig cfg;
    cfg.protocol = parse_protocol(root.child("protocol"));
    cfg.noise = root.has("noise") ? parse_noise(root.child("noise")) : NoiseConfig{};
    cfg.measurement = root.has("measurement") ? parse_measurement(root.child("measurement"), cfg.protocol.kind)
                                              : parse_measurement(Section(json::object(), "measurement"),
                                                                  cfg.protocol.kind);
    if (root.has("execution")) {
        cfg.execution = parse_execution(root.child("execution"));
    }
    if (root.has("output")) {
        cfg.output = parse_output(root.child("output"));
    }
    root.finish();
    return cfg;
}

nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        // The parser message carries the line and column.
        throw ConfigError(path.string() + ": " + e.what());
    }
}

RunConfig load_config(const std::filesystem::path &path) {
    try {
        return parse_config(read_json_file(path));
    } catch (const ConfigError &e) {
        const std::string msg = e.what();
        if (msg.rfind(path.string(), 0) == 0) {
            throw;
        }
        throw ConfigError(path.string() + ": " + msg);
    }
}

nlohmann::ordered_json to_json(const RunConfig &cfg) {
    ordered_json j;
    j["protocol"] = protocol_json(cfg.protocol);
    j["noise"] = noise_json(cfg.noise);
    j["measurement"] = measurement_json(cfg.measurement);
    j["execution"] = {{"shots", cfg.execution.shots},
                      {"seed", cfg.execution.seed},
                      {"threads", cfg.execution.threads},
                      {"duration", cfg.execution.duration},
                      {"condition_on_detection", cfg.execution.condition_on_detection}};
    ordered_json out = {{"records", cfg.output.records},
                        {"summary", cfg.output.summary},
                        {"counts", cfg.output.counts}};
    if (!cfg.output.dir.empty()) {
        out["dir"] = cfg.output.dir;
    }
    j["output"] = out;
    return j;
}

uint64_t config_hash(const RunConfig &cfg) {
    const ordered_json j = {{"protocol", protocol_json(cfg.protocol)},
                            {"noise", noise_json(cfg.noise)},
                            {"condition_on_detection", cfg.execution.condition_on_detection}};
    const std::string text = j.dump();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace photonchain::cli
