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

#ifndef PHOTONCHAIN_SCHEDULE_H
#define PHOTONCHAIN_SCHEDULE_H

#include <string>
#include <string_view>
#include <vector>

#include "photonchain/levels.h"

namespace photonchain {

enum class ProtocolKind { kGhz, kCluster, kCustom, kRateBenchmark, kCoherenceProbe, kDdScan };

std::string to_string(ProtocolKind kind);
ProtocolKind parse_protocol_kind(std::string_view name);

class ScheduleError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Durations of the pulse sequence, in seconds.
struct TimingTable {
    double pump = 5e-6;
    double vstirap_control = 1.5e-6;
    double photon_fwhm = 300e-9;  // metadata only
    double pi_11_to_20 = 53e-6;
    double qubit_gate_total = 132.5e-6;
    double transfer_to_f2_each = 21e-6;
    double closing_transfer = 55e-6;
    double cycle_ghz = 50e-6;
    double cycle_cluster = 200e-6;
    double overhead = 400e-6;  // calibration + cooling after each run

    /// The pi/2 (or theta) pulse inside the composite gate.
    double rotation_pulse() const { return qubit_gate_total - 2.0 * pi_11_to_20; }
    /// Idle time in F=1 that pads a cycle up to its nominal length.
    double ghz_slack() const;
    double cluster_slack() const;

    void validate() const;
};

/// Declarative protocol recipe.
///
/// Rotation slots sit between consecutive emissions, so an N-photon run
/// has N-1 of them: theta = 0 for GHZ (the gate is skipped), pi/2 for
/// cluster states, or a user list for Custom.
struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::kGhz;
    int n_photons = 2;
    std::vector<double> rotation_angles;  // Custom only, N-1 entries
    TimingTable timings;
    int max_first_attempts = 7;
    double repetition_period = 1.1e-3;
    double probe_delay = 0.0;  // CoherenceProbe
    double dd_tau = 0.0;       // DdScan: F=2 dwell before the control pulse
    double dd_cycle = 300e-6;  // DdScan: stretched cycle length
    ZeemanModel zeeman;
    /// Per-photon Z-phase frame applied at detection. Empty selects the
    /// default frame for the kind (see default_frame()).
    std::vector<double> frame_phases;

    static ProtocolConfig ghz(int n);
    static ProtocolConfig cluster(int n);
    static ProtocolConfig custom(std::vector<double> angles);
    static ProtocolConfig rate_benchmark(int n = 14);
    static ProtocolConfig coherence_probe(double delay);
    static ProtocolConfig dd_scan(double tau);

    void validate() const;
    std::vector<double> rotation_program() const;
    std::vector<double> default_frame() const;
    std::vector<double> frame() const;
    double cycle_length() const;
};

struct Step {
    enum class Kind { kPump, kEmit, kRaman, kWait, kMeasure, kClosingScatter };

    Kind kind = Kind::kWait;
    double duration = 0.0;
    EmissionKind emission = EmissionKind::kCycling;
    Sublevel a = level::k1p1;
    Sublevel b = level::k2p2;
    double theta = 0.0;
    double phase = 0.0;
    bool lab_frame = false;  // kWait: precess at the full Larmor frequency
    int slot = -1;           // photon index for kEmit / kMeasure
    int cycle = 0;           // photon cycle the step belongs to
};

std::string to_string(Step::Kind kind);

struct PulseSchedule {
    ProtocolKind kind = ProtocolKind::kGhz;
    int n_photons = 0;
    int max_first_attempts = 7;
    std::vector<Step> steps;
    std::vector<double> frame;
    ZeemanModel zeeman;

    double duration() const;
    int emission_count() const;
    int raman_count_in_cycle(int cycle) const;
    /// Run period including calibration/cooling overhead.
    double run_period(double overhead, double repetition_period) const;
};

PulseSchedule build_schedule(const ProtocolConfig &cfg);

}  // namespace photonchain

#endif  // PHOTONCHAIN_SCHEDULE_H
