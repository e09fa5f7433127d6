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

#ifndef PHOTONCHAIN_NOISE_H
#define PHOTONCHAIN_NOISE_H

#include <string>
#include <utility>
#include <vector>

#include "photonchain/levels.h"
#include "photonchain/rng.h"

namespace photonchain {

enum class FieldModel { kQuasiStatic, kPerCycle };

struct DetectionStage {
    std::string name;
    double efficiency;
};

/// Stochastic imperfections applied by the trajectory engine.
///
/// Photon loss is a single Bernoulli per emitted photon with probability
/// eta0 * eta_d; `detection_chain` is descriptive metadata whose product must
/// equal eta_d when present. Raman pulses get a Gaussian angle error,
/// the closing transfer may scatter, and the Larmor frequency carries a
/// fractional Gaussian offset.
struct NoiseConfig {
    double eta0 = 1.0;
    double eta_d = 1.0;
    std::vector<DetectionStage> detection_chain;
    double raman_sigma = 0.0;
    double closing_scatter_p = 0.0;
    double b_sigma = 0.0;
    FieldModel b_model = FieldModel::kQuasiStatic;

    double eta() const { return eta0 * eta_d; }
    bool noiseless() const {
        return eta0 == 1.0 && eta_d == 1.0 && raman_sigma == 0.0 && closing_scatter_p == 0.0 && b_sigma == 0.0;
    }

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;

    /// The loss budget of the reference setup: 0.94 * 0.94 * 0.97 * 0.90 * 0.90.
    static std::vector<DetectionStage> reference_detection_chain();

    /// Source and detection efficiencies chosen so that eta = 0.4318, Raman
    /// errors at 1 % per-rotation infidelity, 5 % closing scattering and the
    /// field noise calibrated to a 1.2 ms coherence time.
    static NoiseConfig calibrated();
};

struct FieldSample {
    double delta = 0.0;
};

inline constexpr double kClassicalThreshold = 0.66;
inline constexpr double kReferenceEta = 0.4318;
inline constexpr double kReferenceEta0 = 0.66;
inline constexpr double kReferenceCoherenceTime = 1.2e-3;
inline constexpr double kReferenceRotationInfidelity = 0.01;
inline constexpr double kReferenceClosingScatter = 0.05;

bool sample_detection(Rng &rng, const NoiseConfig &cfg);

double perturb_rotation(double theta, Rng &rng, const NoiseConfig &cfg);

/// Mean infidelity E[sin^2(eps/2)] of a rotation with eps ~ N(0, sigma^2);
/// equals (1 - exp(-sigma^2/2))/2.
double rotation_infidelity(double raman_sigma);

/// Inverse of rotation_infidelity.
double raman_sigma_for_infidelity(double infidelity);

struct ScatterResult {
    AtomKet state;
    bool scattered;
};

/// With probability closing_scatter_p replaces the atom by an equal-weight
/// superposition of |2,+1> and |2,-1> with a uniformly random relative
/// phase (a fully dephased closing qubit once averaged).
ScatterResult apply_closing_scatter(const AtomKet &state, Rng &rng, const NoiseConfig &cfg);

FieldSample sample_field(Rng &rng, const NoiseConfig &cfg);

/// Upper envelope of the two-photon overlap after an idle time t under
/// quasi-static Gaussian field noise: (1 + exp(-(2 omega_L b_sigma t)^2 / 2)) / 2.
double coherence_envelope(double t, double b_sigma, double larmor_angular = kLarmorAngular);

/// b_sigma for which coherence_envelope crosses `threshold` at `coherence_time`.
double calibrate_field(double coherence_time, double threshold = kClassicalThreshold,
                       double larmor_angular = kLarmorAngular);

}  // namespace photonchain

#endif  // PHOTONCHAIN_NOISE_H
