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

#ifndef PHOTONCHAIN_CLI_COMMANDS_H
#define PHOTONCHAIN_CLI_COMMANDS_H

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.h"
#include "cli/summary.h"
#include "json.hpp"

namespace photonchain::cli {

/// Overrides the output directory of every subcommand unless --out is given.
inline constexpr const char *kOutputDirEnv = "PHOTONCHAIN_OUTPUT_DIR";

/// --out, then $PHOTONCHAIN_OUTPUT_DIR, then the config's output.dir, then
/// `fallback`.
std::filesystem::path resolve_output_dir(const std::string &flag, const std::string &config_dir,
                                         const std::string &fallback);

struct SimulateArgs {
    std::string config_path;  // optional
    nlohmann::json overrides = nlohmann::json::object();  // merged over the file, same layout
    std::string out_dir;
    bool quiet = false;
};

struct AnalyzeArgs {
    std::vector<std::string> inputs;
    std::string config_path;  // optional hash guard
    std::string out_dir;
    std::vector<std::string> estimators;
    double source_efficiency = kReferenceEta0;
};

struct ReproduceArgs {
    std::string figure;  // fig2 | fig3 | fig4 | edfig3
    std::string out_dir;
    uint64_t seed = 1;
    int threads = 1;
    double scale = 1.0;  // multiplies every shot count and the rate duration
    bool noiseless = false;
    bool write_records = true;
    bool quiet = false;
};

/// Each command returns the process exit code: 0 success, 2 invalid
/// configuration or inconsistent data, 3 I/O failure.
int cmd_simulate(const SimulateArgs &args, std::ostream &out, std::ostream &err);
int cmd_analyze(const AnalyzeArgs &args, std::ostream &out, std::ostream &err);
int cmd_reproduce(const ReproduceArgs &args, std::ostream &out, std::ostream &err);

/// Runs one configured simulation and writes records (or rate counts) and
/// the resolved config into `dir`. Returns the records header.
RecordsHeader run_and_write(const RunConfig &cfg, const std::filesystem::path &dir, std::ostream *progress);

RecordsHeader header_for(const RunConfig &cfg, double run_period);

/// Runs `body`, mapping exceptions to exit codes and printing them to `err`.
int guarded(std::ostream &err, const std::function<int()> &body);

void write_text(const std::filesystem::path &path, const std::string &text);

}  // namespace photonchain::cli

#endif  // PHOTONCHAIN_CLI_COMMANDS_H
