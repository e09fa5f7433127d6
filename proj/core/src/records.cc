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

#include "photonchain/records.h"

#include <stdexcept>

namespace photonchain {

bool ShotRecord::all_detected() const {
    for (const auto &p : photons) {
        if (!p.detected) {
            return false;
        }
    }
    return !photons.empty();
}

bool ShotRecord::detected_range(size_t first, size_t last) const {
    for (size_t i = first; i <= last; ++i) {
        if (!photons[i].detected) {
            return false;
        }
    }
    return true;
}

bool ShotRecord::in_setting(std::span<const MeasBasis> setting) const {
    if (setting.size() != photons.size()) {
        return false;
    }
    for (size_t i = 0; i < setting.size(); ++i) {
        if (!(photons[i].basis == setting[i])) {
            return false;
        }
    }
    return true;
}

std::vector<double> phase_grid(int points) {
    if (points < 2) {
        throw std::invalid_argument("phase grid needs at least two points");
    }
    std::vector<double> phis;
    for (int i = 0; i < points; ++i) {
        phis.push_back(i == points - 1 ? std::numbers::pi : std::numbers::pi * i / (points - 1));
    }
    return phis;
}

std::vector<MeasBasis> alternating_setting(int n, bool x_first) {
    std::vector<MeasBasis> s;
    for (int i = 0; i < n; ++i) {
        const bool x = (i % 2 == 0) == x_first;
        s.push_back(x ? MeasBasis::x() : MeasBasis::z());
    }
    return s;
}

BasisPlan BasisPlan::uniform(int n, const MeasBasis &basis) {
    return {{std::vector<MeasBasis>(static_cast<size_t>(n), basis)}};
}

BasisPlan BasisPlan::parity_grid(int n, int points) {
    BasisPlan plan;
    for (double phi : phase_grid(points)) {
        plan.settings.emplace_back(static_cast<size_t>(n), MeasBasis::equator(phi));
    }
    return plan;
}

BasisPlan BasisPlan::cluster_settings(int n) {
    return {{alternating_setting(n, true), alternating_setting(n, false)}};
}

}  // namespace photonchain
