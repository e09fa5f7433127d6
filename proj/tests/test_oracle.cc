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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "photonchain/engine.h"
#include "photonchain/oracle.h"

namespace photonchain {
namespace {

constexpr double kPi = std::numbers::pi;

double expectation_from_distribution(const std::vector<double> &dist, int n,
                                     std::span<const std::array<double, 2>> w) {
    double acc = 0.0;
    for (size_t b = 0; b < dist.size(); ++b) {
        double prod = 1.0;
        for (int k = 0; k < n; ++k) {
            const size_t bit = (b >> (n - 1 - k)) & 1u;
            prod *= w[static_cast<size_t>(k)][bit];
        }
        acc += dist[b] * prod;
    }
    return acc;
}

TEST(Oracle, CanonicalTargetsAreStabilized) {
    for (int n = 2; n <= 6; ++n) {
        for (const auto &t : {CanonicalTarget::ghz(n), CanonicalTarget::cluster(n)}) {
            const auto psi = t.state();
            const DenseState s = DenseState::from_photons(psi);
            for (const auto &g : t.generators()) {
                EXPECT_NEAR(pauli_expectation(s, g), 1.0, 1e-12) << g.ops;
            }
            EXPECT_NEAR(fidelity(s, t), 1.0, 1e-12);
        }
    }
}

TEST(Oracle, NoiselessGhzRunIsCanonical) {
    for (int n = 2; n <= 6; ++n) {
        const DenseState s = dense_run(ProtocolConfig::ghz(n));
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
        EXPECT_NEAR(fidelity(s, CanonicalTarget::ghz(n)), 1.0, 1e-12) << n;
        EXPECT_NEAR(s.atom_purity(), 1.0, 1e-12);
    }
}

TEST(Oracle, SinglePhotonRunIsAProductState) {
    const DenseState s = dense_run(ProtocolConfig::ghz(1));
    EXPECT_NEAR(s.atom_purity(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(pauli_expectation(s, {"Z"})), 1.0, 1e-12);
}

TEST(Oracle, NoiselessClusterRunIsCanonicalInDefaultFrame) {
    for (int n = 2; n <= 8; ++n) {
        const ProtocolConfig cfg = ProtocolConfig::cluster(n);
        const DenseState framed = apply_frame(dense_run(cfg), cfg.frame());
        EXPECT_NEAR(fidelity(framed, CanonicalTarget::cluster(n)), 1.0, 1e-12) << n;
    }
}

TEST(Oracle, FrameFitRecoversEndPhotonPhases) {
    const int n = 5;
    const FrameFit fit = local_frame_fit(dense_run(ProtocolConfig::cluster(n)), CanonicalTarget::cluster(n), 1e-9);
    ASSERT_EQ(fit.corrections.size(), static_cast<size_t>(n));
    EXPECT_LT(fit.residual, 1e-9);
    for (int k = 0; k < n; ++k) {
        const auto &c = fit.corrections[static_cast<size_t>(k)];
        EXPECT_FALSE(c.hadamard);
        const double want = (k == 0 || k == n - 1) ? kPi : 0.0;
        EXPECT_NEAR(std::abs(std::remainder(c.phase - want, 2 * kPi)), 0.0, 1e-9) << k;
    }
}

TEST(Oracle, FrameFitRejectsForeignStates) {
    // A product state is not locally equivalent to GHZ.
    std::vector<Complex> plus(8, Complex(1.0 / std::sqrt(8.0)));
    EXPECT_THROW(local_frame_fit(DenseState::from_photons(plus), CanonicalTarget::ghz(3), 1e-3), FrameMismatchError);
}

TEST(Oracle, GhzParityFollowsCosine) {
    for (int n : {2, 5, 9, 14}) {
        for (double phi : {0.0, 0.3, 1.0, 2.5}) {
            const std::vector<MeasBasis> bases(static_cast<size_t>(n), MeasBasis::equator(phi));
            EXPECT_NEAR(parity_expectation(ProtocolConfig::ghz(n), bases), std::cos(n * phi), 1e-9);
        }
    }
}

TEST(Oracle, ProductExpectationMatchesDenseState) {
    const ProtocolConfig cfg = ProtocolConfig::custom({0.4, 1.3, 0.0});
    const FieldSample field{2e-3};
    const DenseState s = dense_run(cfg, field);
    const std::vector<MeasBasis> bases = {MeasBasis::x(), MeasBasis::z(), MeasBasis::equator(0.7),
                                          MeasBasis::equator(2.0)};
    const std::vector<std::array<double, 2>> w = {{0.3, 1.1}, {1.0, -1.0}, {0.5, 0.25}, {2.0, 0.0}};
    const auto dist = outcome_distribution(s, bases, cfg.frame());
    double total = 0.0;
    for (double p : dist) {
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(product_expectation(cfg, bases, w, field), expectation_from_distribution(dist, 4, w), 1e-12);
}

TEST(Oracle, MixtureHasReducedPurity) {
    const auto ghz = CanonicalTarget::ghz(3).state();
    std::vector<Complex> flipped = ghz;
    flipped[7] = -flipped[7];
    for (auto &a : flipped) {
        a *= std::sqrt(0.5);
    }
    std::vector<Complex> kept = ghz;
    for (auto &a : kept) {
        a *= std::sqrt(0.5);
    }
    const std::vector<std::vector<Complex>> parts = {kept, flipped};
    const DenseState s = DenseState::from_mixture(parts);
    EXPECT_NEAR(s.atom_purity(), 0.5, 1e-12);
    EXPECT_NEAR(fidelity(s, CanonicalTarget::ghz(3)), 0.5, 1e-12);
    EXPECT_NEAR(pauli_expectation(s, {"XXX"}), 0.0, 1e-12);
    EXPECT_NEAR(pauli_expectation(s, {"ZZI"}), 1.0, 1e-12);
}

TEST(Oracle, SizeCap) {
    EXPECT_THROW(dense_run(ProtocolConfig::ghz(kOracleMaxPhotons + 1)), OracleSizeError);
    EXPECT_NO_THROW(dense_run(ProtocolConfig::ghz(kOracleMaxPhotons)));
}

TEST(Oracle, SampledRecordsFollowDistribution) {
    const DenseState s = dense_run(ProtocolConfig::cluster(3));
    const std::vector<MeasBasis> setting = {MeasBasis::x(), MeasBasis::equator(0.5), MeasBasis::z()};
    const auto dist = outcome_distribution(s, setting);
    Rng rng(8);
    const uint64_t shots = 50000;
    const auto recs = sample_records(s, setting, shots, rng);
    std::vector<double> freq(dist.size(), 0.0);
    for (const auto &r : recs) {
        ASSERT_TRUE(r.all_detected());
        size_t b = 0;
        for (const auto &p : r.photons) {
            b = (b << 1) | (p.outcome == -1 ? 1u : 0u);
        }
        freq[b] += 1.0 / shots;
    }
    for (size_t b = 0; b < dist.size(); ++b) {
        EXPECT_NEAR(freq[b], dist[b], 4 * std::sqrt(dist[b] * (1 - dist[b]) / shots) + 1e-12) << b;
    }
}

TEST(Oracle, TrajectoriesMatchDenseDistribution) {
    const ProtocolConfig cfg = ProtocolConfig::custom({0.9, 2.1});
    const std::vector<MeasBasis> setting = {MeasBasis::equator(0.4), MeasBasis::x(), MeasBasis::z()};
    const auto dist = outcome_distribution(dense_run(cfg), setting, cfg.frame());
    BasisPlan plan;
    plan.settings = {setting};
    const uint64_t shots = 40000;
    const auto recs = run_batch(cfg, NoiseConfig{}, plan, shots, 21);
    std::vector<double> freq(dist.size(), 0.0);
    for (const auto &r : recs) {
        size_t b = 0;
        for (const auto &p : r.photons) {
            b = (b << 1) | (p.outcome == -1 ? 1u : 0u);
        }
        freq[b] += 1.0 / shots;
    }
    double tvd = 0.0;
    for (size_t b = 0; b < dist.size(); ++b) {
        tvd += 0.5 * std::abs(freq[b] - dist[b]);
    }
    EXPECT_LT(tvd, 0.02);
}

}  // namespace
}  // namespace photonchain
