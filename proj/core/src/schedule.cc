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

#include "photonchain/schedule.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace photonchain {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "timing '" << name << "' must be positive, got " << v;
        throw ScheduleError(os.str());
    }
}

class Builder {
   public:
    explicit Builder(PulseSchedule &s) : s_(s) {}

    void pump(int cycle) { push({.kind = Step::Kind::kPump, .duration = dur_pump, .cycle = cycle}); }

    void wait(double d, int cycle, bool lab = false) {
        if (d > 0.0) {
            push({.kind = Step::Kind::kWait, .duration = d, .lab_frame = lab, .cycle = cycle});
        }
    }

    void raman(Sublevel a, Sublevel b, double theta, double d, int cycle) {
        push({.kind = Step::Kind::kRaman, .duration = d, .a = a, .b = b, .theta = theta, .cycle = cycle});
    }

    void emit(EmissionKind k, int slot, int cycle) {
        push({.kind = Step::Kind::kEmit, .emission = k, .slot = slot, .cycle = cycle});
        push({.kind = Step::Kind::kMeasure, .slot = slot, .cycle = cycle});
    }

    void scatter(int cycle) { push({.kind = Step::Kind::kClosingScatter, .cycle = cycle}); }

    double dur_pump = 0.0;

   private:
    void push(Step st) { s_.steps.push_back(st); }
    PulseSchedule &s_;
};

}  // namespace

std::string to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::kGhz:
            return "ghz";
        case ProtocolKind::kCluster:
            return "cluster";
        case ProtocolKind::kCustom:
            return "custom";
        case ProtocolKind::kRateBenchmark:
            return "rate";
        case ProtocolKind::kCoherenceProbe:
            return "coherence";
        case ProtocolKind::kDdScan:
            return "ddscan";
    }
    return "unknown";
}

ProtocolKind parse_protocol_kind(std::string_view name) {
    for (auto k : {ProtocolKind::kGhz, ProtocolKind::kCluster, ProtocolKind::kCustom, ProtocolKind::kRateBenchmark,
                   ProtocolKind::kCoherenceProbe, ProtocolKind::kDdScan}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown protocol kind '" + std::string(name) +
                                "' (expected ghz, cluster, custom, rate, coherence or ddscan)");
}

std::string to_string(Step::Kind kind) {
    switch (kind) {
        case Step::Kind::kPump:
            return "pump";
        case Step::Kind::kEmit:
            return "emit";
        case Step::Kind::kRaman:
            return "raman";
        case Step::Kind::kWait:
            return "wait";
        case Step::Kind::kMeasure:
            return "measure";
        case Step::Kind::kClosingScatter:
            return "closing_scatter";
    }
    return "unknown";
}

double TimingTable::ghz_slack() const { return cycle_ghz - 2.0 * transfer_to_f2_each - vstirap_control; }

double TimingTable::cluster_slack() const {
    return cycle_cluster - qubit_gate_total - 2.0 * transfer_to_f2_each - vstirap_control;
}

void TimingTable::validate() const {
    require_positive(pump, "pump");
    require_positive(vstirap_control, "vstirap_control");
    require_positive(photon_fwhm, "photon_fwhm");
    require_positive(pi_11_to_20, "pi_11_to_20");
    require_positive(qubit_gate_total, "qubit_gate_total");
    require_positive(transfer_to_f2_each, "transfer_to_f2_each");
    require_positive(closing_transfer, "closing_transfer");
    require_positive(cycle_ghz, "cycle_ghz");
    require_positive(cycle_cluster, "cycle_cluster");
    if (!(overhead >= 0.0)) {
        throw ScheduleError("timing 'overhead' must be non-negative");
    }
    if (!(rotation_pulse() > 0.0)) {
        throw ScheduleError("qubit_gate_total must exceed two pi_11_to_20 pulses");
    }
    if (ghz_slack() < 0.0) {
        throw ScheduleError("cycle_ghz is shorter than its transfers plus control pulse");
    }
    if (cluster_slack() < 0.0) {
        throw ScheduleError("cycle_cluster is shorter than its gate, transfers and control pulse");
    }
}

ProtocolConfig ProtocolConfig::ghz(int n) {
    ProtocolConfig c;
    c.kind = ProtocolKind::kGhz;
    c.n_photons = n;
    return c;
}

ProtocolConfig ProtocolConfig::cluster(int n) {
    ProtocolConfig c;
    c.kind = ProtocolKind::kCluster;
    c.n_photons = n;
    return c;
}

ProtocolConfig ProtocolConfig::custom(std::vector<double> angles) {
    ProtocolConfig c;
    c.kind = ProtocolKind::kCustom;
    c.n_photons = static_cast<int>(angles.size()) + 1;
    c.rotation_angles = std::move(angles);
    return c;
}

ProtocolConfig ProtocolConfig::rate_benchmark(int n) {
    ProtocolConfig c;
    c.kind = ProtocolKind::kRateBenchmark;
    c.n_photons = n;
    c.max_first_attempts = 1;
    return c;
}

ProtocolConfig ProtocolConfig::coherence_probe(double delay) {
    ProtocolConfig c;
    c.kind = ProtocolKind::kCoherenceProbe;
    c.n_photons = 2;
    c.probe_delay = delay;
    return c;
}

ProtocolConfig ProtocolConfig::dd_scan(double tau) {
    ProtocolConfig c;
    c.kind = ProtocolKind::kDdScan;
    c.n_photons = 6;
    c.dd_tau = tau;
    return c;
}

void ProtocolConfig::validate() const {
    if (n_photons < 1) {
        throw std::invalid_argument("n_photons must be at least 1");
    }
    if (max_first_attempts < 1) {
        throw std::invalid_argument("max_first_attempts must be at least 1");
    }
    if (!(repetition_period > 0.0)) {
        throw std::invalid_argument("repetition_period must be positive");
    }
    timings.validate();
    if (kind == ProtocolKind::kCustom && static_cast<int>(rotation_angles.size()) != n_photons - 1) {
        throw std::invalid_argument("custom protocol needs exactly n_photons - 1 rotation angles");
    }
    if (kind != ProtocolKind::kCustom && !rotation_angles.empty()) {
        throw std::invalid_argument("rotation_angles are only valid for the custom protocol");
    }
    if (kind == ProtocolKind::kCoherenceProbe) {
        if (n_photons != 2) {
            throw std::invalid_argument("coherence probe uses exactly two photons");
        }
        if (!(probe_delay >= 0.0)) {
            throw std::invalid_argument("probe delay must be non-negative");
        }
    }
    if (kind == ProtocolKind::kDdScan) {
        if (n_photons < 2) {
            throw std::invalid_argument("ddscan needs at least two photons");
        }
        const double slack = dd_cycle - 2.0 * timings.transfer_to_f2_each - timings.vstirap_control;
        if (!(dd_tau >= 0.0) || dd_tau > slack) {
            std::ostringstream os;
            os << "dd tau " << dd_tau << " s outside the cycle slack [0, " << slack << "] s";
            throw ScheduleError(os.str());
        }
    }
    if (!frame_phases.empty() && static_cast<int>(frame_phases.size()) != n_photons) {
        throw std::invalid_argument("frame_phases must have one entry per photon");
    }
}

std::vector<double> ProtocolConfig::rotation_program() const {
    const size_t slots = n_photons > 1 ? static_cast<size_t>(n_photons - 1) : 0;
    switch (kind) {
        case ProtocolKind::kCluster:
            return std::vector<double>(slots, kPi / 2.0);
        case ProtocolKind::kCustom:
            return rotation_angles;
        default:
            return std::vector<double>(slots, 0.0);
    }
}

std::vector<double> ProtocolConfig::default_frame() const {
    std::vector<double> f(static_cast<size_t>(n_photons), 0.0);
    // The pi - pi/2 - pi composite acts as a Hadamard on the qubit, and with
    // the emission sign conventions the chain comes out as the canonical
    // linear cluster state up to Z on the two end photons.
    if (kind == ProtocolKind::kCluster && n_photons >= 2) {
        f.front() = kPi;
        f.back() = kPi;
    }
    return f;
}

std::vector<double> ProtocolConfig::frame() const { return frame_phases.empty() ? default_frame() : frame_phases; }

double ProtocolConfig::cycle_length() const {
    switch (kind) {
        case ProtocolKind::kCluster:
            return timings.cycle_cluster;
        case ProtocolKind::kDdScan:
            return dd_cycle;
        default:
            return timings.cycle_ghz;
    }
}

double PulseSchedule::duration() const {
    double t = 0.0;
    for (const auto &s : steps) {
        t += s.duration;
    }
    return t;
}

int PulseSchedule::emission_count() const {
    return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const Step &s) { return s.kind == Step::Kind::kEmit; }));
}

int PulseSchedule::raman_count_in_cycle(int cycle) const {
    return static_cast<int>(std::count_if(steps.begin(), steps.end(), [cycle](const Step &s) {
        return s.kind == Step::Kind::kRaman && s.cycle == cycle;
    }));
}

double PulseSchedule::run_period(double overhead, double repetition_period) const {
    return std::max(duration() + overhead, repetition_period);
}

PulseSchedule build_schedule(const ProtocolConfig &cfg) {
    cfg.validate();
    const TimingTable &t = cfg.timings;
    PulseSchedule s;
    s.kind = cfg.kind;
    s.n_photons = cfg.n_photons;
    s.max_first_attempts = cfg.max_first_attempts;
    s.frame = cfg.frame();
    s.zeeman = cfg.zeeman;

    Builder b(s);
    b.dur_pump = t.pump;
    const int n = cfg.n_photons;
    const auto program = cfg.rotation_program();

    b.pump(0);
    if (n == 1) {
        // Single photon: move the pumped |2,0> into the qubit level and close.
        b.raman(level::k20, level::k1p1, kPi, t.pi_11_to_20, 0);
        b.raman(level::k1p1, level::k2m1, kPi, t.closing_transfer / 2.0, 0);
        b.raman(level::k1m1, level::k2p1, kPi, t.closing_transfer / 2.0, 0);
        b.scatter(0);
        b.wait(t.vstirap_control, 0);
        b.emit(EmissionKind::kClosing, 0, 0);
        return s;
    }

    b.wait(t.vstirap_control, 0);
    b.emit(EmissionKind::kInitial, 0, 0);

    for (int slot = 1; slot < n; ++slot) {
        const int cycle = slot;
        const double theta = program[static_cast<size_t>(slot - 1)];
        const bool closing = slot == n - 1;
        const bool gate = theta != 0.0;

        if (cfg.kind == ProtocolKind::kCoherenceProbe) {
            b.wait(cfg.probe_delay, cycle, /*lab=*/true);
        } else if (!closing) {
            double slack = 0.0;
            if (cfg.kind == ProtocolKind::kDdScan) {
                slack = cfg.dd_cycle - 2.0 * t.transfer_to_f2_each - t.vstirap_control - cfg.dd_tau;
            } else if (gate) {
                slack = t.cycle_cluster - t.qubit_gate_total - 2.0 * t.transfer_to_f2_each - t.vstirap_control;
            } else {
                slack = t.ghz_slack();
            }
            b.wait(slack, cycle);
        }

        if (gate) {
            b.raman(level::k1p1, level::k20, kPi, t.pi_11_to_20, cycle);
            b.raman(level::k1m1, level::k20, theta, t.rotation_pulse(), cycle);
            b.raman(level::k1p1, level::k20, kPi, t.pi_11_to_20, cycle);
        }

        if (closing) {
            b.raman(level::k1p1, level::k2m1, kPi, t.closing_transfer / 2.0, cycle);
            b.raman(level::k1m1, level::k2p1, kPi, t.closing_transfer / 2.0, cycle);
            b.scatter(cycle);
            b.wait(t.vstirap_control, cycle);
            b.emit(EmissionKind::kClosing, slot, cycle);
        } else {
            b.raman(level::k1p1, level::k2p2, kPi, t.transfer_to_f2_each, cycle);
            b.raman(level::k1m1, level::k2m2, kPi, t.transfer_to_f2_each, cycle);
            if (cfg.kind == ProtocolKind::kDdScan) {
                b.wait(cfg.dd_tau, cycle);
            }
            b.wait(t.vstirap_control, cycle);
            b.emit(EmissionKind::kCycling, slot, cycle);
        }
    }
    return s;
}

}  // namespace photonchain
