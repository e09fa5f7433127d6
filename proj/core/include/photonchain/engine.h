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

// Monte-Carlo execution of pulse schedules.
//
// Each photon is measured (or lost) right after it is emitted, so a shot only
// ever holds the 8-level atomic state plus one transient photon. Photons do
// not interact after emission and every analysis is a product of local
// measurements, so the outcome statistics equal those of measuring the whole
// string at the end; the oracle tests check this equivalence.

#ifndef PHOTONCHAIN_ENGINE_H
#define PHOTONCHAIN_ENGINE_H

#include <cstdint>
#include <span>
#include <vector>

#include "photonchain/analysis.h"
#include "photonchain/noise.h"
#include "photonchain/records.h"
#include "photonchain/rng.h"
#include "photonchain/schedule.h"

namespace photonchain {

struct RunOptions {
    /// Skip optical-loss sampling: every emitted photon reaches the detector.
    /// Emission failures from atomic errors still show up as missing photons.
    /// Statistics of fully detected events are unchanged because loss is
    /// independent of polarization; only the raw shot count differs by
    /// eta^-N. Used to fast-forward post-selected analyses.
    bool condition_on_detection = false;
    int threads = 1;
    /// Index of the first shot; shot i always uses stream(seed, i).
    uint64_t first_shot = 0;
};

ShotRecord run_shot(const PulseSchedule &schedule, const NoiseConfig &noise, std::span<const MeasBasis> bases,
                    Rng &rng, const RunOptions &options = {});

/// Runs `shots` independent shots. Shot i draws from Rng::stream(seed, i)
/// and records come back in shot order, so results do not depend on
/// options.threads.
std::vector<ShotRecord> run_batch(const ProtocolConfig &cfg, const NoiseConfig &noise, const BasisPlan &plan,
                                  uint64_t shots, uint64_t seed, const RunOptions &options = {});

struct RateCounts {
    int max_n = 0;
    uint64_t runs = 0;
    double duration = 0.0;
    double period = 0.0;
    std::vector<uint64_t> counts;  // counts[n-1]: runs whose photons 1..n were all detected

    double rate(int n) const { return static_cast<double>(counts[static_cast<size_t>(n - 1)]) / duration; }
    double rate_per_minute(int n) const { return 60.0 * rate(n); }
};

/// Simulates back-to-back runs for `duration` seconds of wall clock, one run
/// per repetition period, and counts N-fold coincidences starting at the
/// first attempt.
RateCounts rate_benchmark(const ProtocolConfig &cfg, const NoiseConfig &noise, double duration, uint64_t seed,
                          int threads = 1);

struct CoherencePoint {
    double delay = 0.0;
    Estimate overlap;
};

/// Two-photon memory probe: photon 1 in the linear (X) basis, the atom idles
/// for `delay` precessing at the full Larmor frequency, then it is mapped
/// to photon 2 measured in the same basis. Returns the probability that
/// the pair shows the correlation of the zero-delay noiseless map.
/// Outcome product o1*o2 of the noiseless zero-delay probe.
int coherence_reference_product();
/// Fraction of fully detected probe events whose outcome product matches
/// the zero-delay reference.
Estimate coherence_overlap(std::span<const ShotRecord> records);

CoherencePoint coherence_probe(double delay, const NoiseConfig &noise, uint64_t shots, uint64_t seed,
                               const ZeemanModel &zeeman = {}, int threads = 1);

/// Delay at which the probe envelope first drops below `threshold`,
/// sampled on delays that are whole Larmor half-periods so the fast
/// oscillation sits at its maximum. Linear interpolation between samples.
double coherence_crossing(const NoiseConfig &noise, double t_min, double t_max, double step, uint64_t shots,
                          uint64_t seed, double threshold = kClassicalThreshold, const ZeemanModel &zeeman = {},
                          int threads = 1);

struct DdPoint {
    double tau = 0.0;
    CoherenceFit fit;
};

/// Parity visibility of the stretched 6-photon GHZ sequence for each tau.
std::vector<DdPoint> dd_scan(std::span<const double> taus, const NoiseConfig &noise, uint64_t shots_per_tau,
                             uint64_t seed, const ZeemanModel &zeeman = {}, int phi_points = 25, int threads = 1);

}  // namespace photonchain

#endif  // PHOTONCHAIN_ENGINE_H
