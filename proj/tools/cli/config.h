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

#ifndef PHOTONCHAIN_CLI_CONFIG_H
#define PHOTONCHAIN_CLI_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <string>

#include "cli/errors.h"
#include "json.hpp"
#include "photonchain/engine.h"

namespace photonchain::cli {

struct MeasurementPlan {
    std::string plan;  // z | x | parity | cluster | equator
    double phi = 0.0;
    int phi_points = 25;

    BasisPlan basis_plan(int n) const;
};

struct Execution {
    uint64_t shots = 10000;
    uint64_t seed = 1;
    int threads = 1;
    double duration = 600.0;  // rate mode, seconds
    bool condition_on_detection = false;
};

struct OutputSpec {
    std::string dir;
    std::string records = "records.tsv";
    std::string summary = "summary.json";
    std::string counts = "rate_counts.tsv";
};

struct RunConfig {
    ProtocolConfig protocol;
    NoiseConfig noise;
    MeasurementPlan measurement;
    Execution execution;
    OutputSpec output;
};

/// Parses and validates a run configuration. Unknown keys are rejected;
/// errors name the offending field.
RunConfig parse_config(const nlohmann::json &doc);
RunConfig load_config(const std::filesystem::path &path);
nlohmann::json read_json_file(const std::filesystem::path &path);

/// Fully resolved configuration; parse_config(to_json(c)) reproduces c.
nlohmann::ordered_json to_json(const RunConfig &cfg);

/// FNV-1a 64 of the resolved protocol and noise sections. The basis plan is
/// left out so runs of one physical setup in different bases can be merged.
uint64_t config_hash(const RunConfig &cfg);
std::string hash_hex(uint64_t hash);

}  // namespace photonchain::cli

#endif  // PHOTONCHAIN_CLI_CONFIG_H
