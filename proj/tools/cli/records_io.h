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

#ifndef PHOTONCHAIN_CLI_RECORDS_IO_H
#define PHOTONCHAIN_CLI_RECORDS_IO_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cli/errors.h"
#include "photonchain/engine.h"

namespace photonchain::cli {

struct RecordsHeader {
    std::string config_hash;
    uint64_t seed = 0;
    ProtocolKind kind = ProtocolKind::kGhz;
    int n = 0;
    uint64_t shots = 0;
    double run_period = 0.0;
};

struct RecordsFile {
    RecordsHeader header;
    std::vector<ShotRecord> records;
};

/// Tab-separated text: two comment lines (format tag, then key=value
/// metadata), a column header, then one row per shot: run_id, attempts,
/// void, field_delta, t_offset and a (detected, basis, outcome) triple per
/// photon. Undetected outcomes are written as '.'.
void write_records(std::ostream &out, const RecordsHeader &header, std::span<const ShotRecord> records);
void write_records(const std::filesystem::path &path, const RecordsHeader &header,
                   std::span<const ShotRecord> records);
RecordsFile read_records(std::istream &in, const std::string &name = "records");
RecordsFile read_records(const std::filesystem::path &path);

struct CountsFile {
    RecordsHeader header;  // shots holds the number of runs
    RateCounts counts;
};

void write_counts(const std::filesystem::path &path, const RecordsHeader &header, const RateCounts &counts);
CountsFile read_counts(const std::filesystem::path &path);

/// True when the file starts with the rate-counts tag.
bool is_counts_file(const std::filesystem::path &path);

std::string format_double(double v);

}  // namespace photonchain::cli

#endif  // PHOTONCHAIN_CLI_RECORDS_IO_H
