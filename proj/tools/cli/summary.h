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

#ifndef PHOTONCHAIN_CLI_SUMMARY_H
#define PHOTONCHAIN_CLI_SUMMARY_H

#include <span>
#include <string>
#include <vector>

#include "cli/records_io.h"
#include "json.hpp"
#include "photonchain/analysis.h"

namespace photonchain::cli {

/// Estimator names accepted by analyze.
inline const std::vector<std::string> kEstimators = {"populations", "parity",          "coherence",
                                                     "fidelity",    "ghz_witness",     "stabilizers",
                                                     "cluster_witness", "overlap",     "rate"};

struct AnalysisOptions {
    std::vector<std::string> estimators;  // empty: every estimator the data supports
    double source_efficiency = kReferenceEta0;
};

/// A plot-ready tab-separated text file.
struct CurveFile {
    std::string name;
    std::string text;
};

nlohmann::ordered_json estimate_json(const Estimate &e);
nlohmann::ordered_json witness_json(const WitnessResult &w);
nlohmann::ordered_json decay_json(const DecayFit &d);

/// Runs the requested estimators over one set of records (all from the
/// same configuration). Throws ConfigError when a requested estimator lacks
/// the measurement setting it needs.
nlohmann::ordered_json summarize_records(const RecordsHeader &header, std::span<const uint64_t> seeds,
                                         std::span<const ShotRecord> records, const AnalysisOptions &options,
                                         std::vector<CurveFile> *curves = nullptr);

nlohmann::ordered_json summarize_counts(const CountsFile &counts, const AnalysisOptions &options,
                                        std::vector<CurveFile> *curves = nullptr);

/// Two-space indented JSON with a trailing newline.
std::string dump_summary(const nlohmann::ordered_json &summary);

}  // namespace photonchain::cli

#endif  // PHOTONCHAIN_CLI_SUMMARY_H
