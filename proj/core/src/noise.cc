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

#include "photonchain/noise.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace photonchain {

namespace {

void require_probability(double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream os;
        os << name << " must be a probability in [0, 1], got " << p;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

void NoiseConfig::validate() const {
    require_probability(eta0, "eta0");
    require_probability(eta_d, "eta_d");
    require_probability(closing_scatter_p, "closing_scatter_p");
    if (!(raman_sigma >= 0.0) || !std::isfinite(raman_sigma)) {
        throw std::invalid_argument("raman_sigma must be finite and non-negative");
    }
    if (!(b_sigma >= 0.0) || !std::isfinite(b_sigma)) {
        throw std::invalid_argument("b_sigma must be finite and non-negative");
    }
    if (!detection_chain.empty()) {
        double product = 1.0;
        for (const auto &stage : detection_chain) {
            require_probability(stage.efficiency, "detection_chain efficiency");
            product *= stage.efficiency;
        }
        if (std::abs(product - eta_d) > 1e-9) {
            std::ostringstream os;
            os << "detection_chain product " << product << " does not match eta_d " << eta_d;
            throw std::invalid_argument(os.str());
        }
    }
}

std::vector<DetectionStage> NoiseConfig::reference_detection_chain() {
    return {
        {"fiber_coupling_1", 0.94},
        {"fiber_coupling_2", 0.94},
        {"fiber_propagation", 0.97},
        {"free_space_optics", 0.90},
        {"detector", 0.90},
    };
}

NoiseConfig NoiseConfig::calibrated() {
    NoiseConfig cfg;
    cfg.eta0 = kReferenceEta0;
    cfg.eta_d = kReferenceEta / kReferenceEta0;
    cfg.raman_sigma = raman_sigma_for_infidelity(kReferenceRotationInfidelity);
    cfg.closing_scatter_p = kReferenceClosingScatter;
    cfg.b_sigma = calibrate_field(kReferenceCoherenceTime);
    return cfg;
}

bool sample_detection(Rng &rng, const NoiseConfig &cfg) {
    const double p = cfg.eta();
    if (p >= 1.0) {
        return true;
    }
    return rng.uniform() < p;
}

double perturb_rotation(double theta, Rng &rng, const NoiseConfig &cfg) {
    if (cfg.raman_sigma < 0.0) {
        throw std::invalid_argument("raman_sigma must be non-negative");
    }
    if (cfg.raman_sigma == 0.0) {
        return theta;
    }
    return theta + cfg.raman_sigma * rng.normal();
}

double rotation_infidelity(double raman_sigma) {
    return 0.5 * (1.0 - std::exp(-0.5 * raman_sigma * raman_sigma));
}

double raman_sigma_for_infidelity(double infidelity) {
    if (!(infidelity >= 0.0 && infidelity < 0.5)) {
        throw std::invalid_argument("rotation infidelity must lie in [0, 0.5)");
    }
    return std::sqrt(-2.0 * std::log(1.0 - 2.0 * infidelity));
}

ScatterResult apply_closing_scatter(const AtomKet &state, Rng &rng, const NoiseConfig &cfg) {
    if (cfg.closing_scatter_p <= 0.0 || !rng.bernoulli(cfg.closing_scatter_p)) {
        return {state, false};
    }
    const double chi = 2.0 * std::numbers::pi * rng.uniform();
    AtomKet out;
    const double h = 1.0 / std::sqrt(2.0);
    out[level::k2p1] = h;
    out[level::k2m1] = h * std::polar(1.0, chi);
    return {out, true};
}

FieldSample sample_field(Rng &rng, const NoiseConfig &cfg) {
    if (cfg.b_sigma == 0.0) {
        return {0.0};
    }
    return {cfg.b_sigma * rng.normal()};
}

double coherence_envelope(double t, double b_sigma, double larmor_angular) {
    const double x = 2.0 * larmor_angular * b_sigma * t;
    return 0.5 * (1.0 + std::exp(-0.5 * x * x));
}

double calibrate_field(double coherence_time, double threshold, double larmor_angular) {
    if (!(coherence_time > 0.0)) {
        throw std::invalid_argument("target coherence time must be positive");
    }
    if (!(threshold > 0.5 && threshold < 1.0)) {
        throw std::invalid_argument("coherence threshold must lie in (0.5, 1)");
    }
    if (std::isinf(coherence_time)) {
        return 0.0;
    }
    // (1 + exp(-x^2/2))/2 = threshold  =>  x = sqrt(2 ln(1/(2 threshold - 1))).
    const double x = std::sqrt(2.0 * std::log(1.0 / (2.0 * threshold - 1.0)));
    return x / (2.0 * larmor_angular * coherence_time);
}

}  // namespace photonchain
