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

#ifndef PHOTONCHAIN_RECORDS_H
#define PHOTONCHAIN_RECORDS_H

#include <cstdint>
#include <span>
#include <vector>

#include "photonchain/levels.h"

namespace photonchain {

struct PhotonRecord {
    bool detected = false;
    MeasBasis basis = MeasBasis::z();
    int outcome = 0;  // +1 / -1 when detected, 0 otherwise

    friend bool operator==(const PhotonRecord &, const PhotonRecord &) = default;
};

/// Outcome log of one run. Exactly n_photons entries; a void shot (first
/// photon never detected) has every entry undetected.
struct ShotRecord {
    uint64_t run_id = 0;
    std::vector<PhotonRecord> photons;
    int first_photon_attempts = 1;
    bool void_shot = false;
    double field_delta = 0.0;
    double wall_clock_offset = 0.0;

    bool all_detected() const;
    bool detected_range(size_t first, size_t last) const;  // inclusive
    /// True when every photon was measured in the matching basis.
    bool in_setting(std::span<const MeasBasis> setting) const;

    friend bool operator==(const ShotRecord &, const ShotRecord &) = default;
};

/// Measurement settings assigned round-robin: shot i uses settings[i % size].
struct BasisPlan {
    std::vector<std::vector<MeasBasis>> settings;

    static BasisPlan uniform(int n, const MeasBasis &basis);
    /// Equator(phi)^N over `points` values evenly spaced on [0, pi].
    static BasisPlan parity_grid(int n, int points = 25);
    /// XZXZ... and ZXZX..., alternating.
    static BasisPlan cluster_settings(int n);

    const std::vector<MeasBasis> &for_shot(uint64_t shot) const { return settings[shot % settings.size()]; }
};

std::vector<MeasBasis> alternating_setting(int n, bool x_first);
std::vector<double> phase_grid(int points);

}  // namespace photonchain

#endif  // PHOTONCHAIN_RECORDS_H
