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

// Estimators turning shot records into figures of merit: GHZ populations,
// parity oscillations and their fitted visibility, fidelities and
// stabilizer-witness lower bounds, coincidence-rate fits and linear decay
// fits with extrapolation to the 50 % threshold.

#ifndef PHOTONCHAIN_ANALYSIS_H
#define PHOTONCHAIN_ANALYSIS_H

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "photonchain/records.h"

namespace photonchain {

class InsufficientDataError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Value with one-standard-deviation error and the number of post-selected
/// events behind it.
struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
    uint64_t n_events = 0;

    bool empty() const { return n_events == 0; }
};

/// Fraction of fully detected Z^N events with all outcomes equal.
Estimate populations(std::span<const ShotRecord> records, int n);

/// Mean outcome product over fully detected events measured in Equator(phi)^N.
Estimate parity(std::span<const ShotRecord> records, double phi);

struct ParityPoint {
    double phi = 0.0;
    Estimate parity;
};
using ParityCurve = std::vector<ParityPoint>;

/// Groups equator-basis records by phi (sorted ascending).
ParityCurve parity_curve(std::span<const ShotRecord> records);

struct CoherenceFit {
    Estimate amplitude;  // visibility A in A cos(N phi + offset)
    double offset = 0.0;
    double offset_stderr = 0.0;
};

/// Linear least squares of parity on (cos N phi, sin N phi), weighted by
/// 1/sigma^2 when the points carry errors. Needs at least 8 distinct phi.
CoherenceFit fit_coherence(const ParityCurve &curve, int n);

/// (P + C) / 2 with errors added in quadrature.
Estimate ghz_fidelity(const Estimate &population, const Estimate &coherence);

struct WitnessResult {
    Estimate bound;
    std::vector<std::string> settings_used;
    std::vector<Estimate> components;
};

/// Stabilizer witness bound for GHZ states from the X^N and Z^N settings:
/// F >= (1 + <X...X>)/2 + <prod_k (1 + Z_{k-1} Z_k)/2> - 1. The second term
/// is evaluated event by event, which makes it the all-equal population.
WitnessResult ghz_witness(std::span<const ShotRecord> records_x, std::span<const ShotRecord> records_z);

/// Per-stabilizer S_k = Z_{k-1} X_k Z_{k+1} (k = 1..N, ends dropped) from
/// any records where photons k-1..k+1 were detected in the right bases.
/// Entries with no usable window have n_events == 0.
std::vector<Estimate> stabilizers(std::span<const ShotRecord> records, int n);

/// Cluster witness F >= <prod_even (1+S_k)/2> + <prod_odd (1+S_k)/2> - 1.
/// Each product is averaged event by event within its own setting (ZXZX...
/// for even k, XZXZ... for odd k) over fully detected events.
WitnessResult cluster_witness(std::span<const ShotRecord> records, int n);

/// Same bound assembled from per-stabilizer averages (product of means).
WitnessResult cluster_witness_from_stabilizers(std::span<const Estimate> s);

struct RatePoint {
    int n = 0;
    uint64_t counts = 0;
    double rate = 0.0;
    double rate_stderr = 0.0;
    double fitted_rate = 0.0;
    double loss_corrected_rate = 0.0;
};

struct RateFit {
    Estimate eta;
    double prefactor = 0.0;  // fitted rate at N = 0
    std::vector<RatePoint> points;
    std::vector<int> dropped;  // N values with zero counts
};

/// Weighted least squares of log(rate) against N with Poisson weights.
/// `source_efficiency` (if > 0) produces the loss-corrected curve
/// prefactor * eta0^N.
RateFit rate_fit(std::span<const uint64_t> counts, double duration, double source_efficiency = 0.0);

struct DecayPoint {
    int n = 0;
    Estimate value;
};

struct DecayFit {
    double decay_per_photon = 0.0;  // minus the fitted slope
    double decay_stderr = 0.0;
    double intercept = 0.0;
    double intercept_stderr = 0.0;
    std::optional<double> crossing_n;  // where the line reaches 0.5
    double crossing_stderr = 0.0;
};

/// Weighted linear fit (weights 1/sigma^2) and extrapolated 50 % crossing.
DecayFit decay_fit(std::span<const DecayPoint> points);

}  // namespace photonchain

#endif  // PHOTONCHAIN_ANALYSIS_H
