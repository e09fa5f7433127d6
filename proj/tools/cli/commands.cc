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

#include "cli/commands.h"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>

#include "cli/records_io.h"

namespace photonchain::cli {

namespace {

constexpr uint64_t kProgressChunk = uint64_t{1} << 16;

}  // namespace

int guarded(std::ostream &err, const std::function<int()> &body) {
    try {
        return body();
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const IoError &e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const InsufficientDataError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const FitError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

RecordsHeader header_for(const RunConfig &cfg, double run_period) {
    RecordsHeader h;
    h.config_hash = hash_hex(config_hash(cfg));
    h.seed = cfg.execution.seed;
    h.kind = cfg.protocol.kind;
    h.n = cfg.protocol.n_photons;
    h.shots = cfg.execution.shots;
    h.run_period = run_period;
    return h;
}

std::filesystem::path resolve_output_dir(const std::string &flag, const std::string &config_dir,
                                         const std::string &fallback) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char *env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    if (!config_dir.empty()) {
        return config_dir;
    }
    return fallback;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

RecordsHeader run_and_write(const RunConfig &cfg, const std::filesystem::path &dir, std::ostream *progress) {
    const PulseSchedule schedule = build_schedule(cfg.protocol);
    const double period = schedule.run_period(cfg.protocol.timings.overhead, cfg.protocol.repetition_period);
    RecordsHeader header = header_for(cfg, period);
    write_text(dir / "config.json", to_json(cfg).dump(2) + "\n");

    if (cfg.protocol.kind == ProtocolKind::kRateBenchmark) {
        const RateCounts counts = rate_benchmark(cfg.protocol, cfg.noise, cfg.execution.duration,
                                                 cfg.execution.seed, cfg.execution.threads);
        header.shots = counts.runs;
        write_counts(dir / cfg.output.counts, header, counts);
        if (progress) {
            *progress << "rate benchmark: " << counts.runs << " runs over " << counts.duration << " s; "
                      << counts.max_n << "-fold events: " << counts.counts.back() << '\n';
        }
        return header;
    }

    const BasisPlan plan = cfg.measurement.basis_plan(cfg.protocol.n_photons);
    RunOptions opts;
    opts.condition_on_detection = cfg.execution.condition_on_detection;
    opts.threads = cfg.execution.threads;
    std::vector<ShotRecord> records;
    records.reserve(cfg.execution.shots);
    for (uint64_t first = 0; first < cfg.execution.shots; first += kProgressChunk) {
        const uint64_t count = std::min(kProgressChunk, cfg.execution.shots - first);
        opts.first_shot = first;
        auto chunk = run_batch(cfg.protocol, cfg.noise, plan, count, cfg.execution.seed, opts);
        std::move(chunk.begin(), chunk.end(), std::back_inserter(records));
        if (progress && cfg.execution.shots > kProgressChunk) {
            *progress << "  " << records.size() << " / " << cfg.execution.shots << " shots\n";
        }
    }
    write_records(dir / cfg.output.records, header, records);
    if (progress) {
        uint64_t full = 0;
        uint64_t void_shots = 0;
        for (const auto &r : records) {
            full += r.all_detected() ? 1 : 0;
            void_shots += r.void_shot ? 1 : 0;
        }
        *progress << to_string(cfg.protocol.kind) << " N=" << cfg.protocol.n_photons << ": " << records.size()
                  << " shots, " << full << " fully detected, " << void_shots << " void\n";
    }
    return header;
}

int cmd_simulate(const SimulateArgs &args, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        nlohmann::json doc = args.config_path.empty() ? nlohmann::json::object() : read_json_file(args.config_path);
        if (!doc.is_object()) {
            throw ConfigError("config: expected a JSON object");
        }
        doc.merge_patch(args.overrides);
        RunConfig cfg;
        try {
            cfg = parse_config(doc);
        } catch (const ConfigError &e) {
            if (args.config_path.empty()) {
                throw;
            }
            throw ConfigError(args.config_path + ": " + e.what());
        }
        const auto dir = resolve_output_dir(args.out_dir, cfg.output.dir, "photonchain-out");
        const RecordsHeader h = run_and_write(cfg, dir, args.quiet ? nullptr : &out);
        if (!args.quiet) {
            out << "wrote " << (dir / (cfg.protocol.kind == ProtocolKind::kRateBenchmark ? cfg.output.counts
                                                                                        : cfg.output.records))
                       .string()
                << " (config " << h.config_hash << ", seed " << h.seed << ")\n";
        }
        return kExitOk;
    });
}

int cmd_analyze(const AnalyzeArgs &args, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        if (args.inputs.empty()) {
            throw ConfigError("analyze: no input files");
        }
        std::string expected_hash;
        if (!args.config_path.empty()) {
            expected_hash = hash_hex(config_hash(load_config(args.config_path)));
        }
        AnalysisOptions opts;
        opts.estimators = args.estimators;
        opts.source_efficiency = args.source_efficiency;
        std::vector<CurveFile> curves;
        nlohmann::ordered_json summary;

        auto check_hash = [&](const RecordsHeader &h, const std::string &name) {
            if (!expected_hash.empty() && h.config_hash != expected_hash) {
                throw ConfigError(name + ": config hash " + h.config_hash + " does not match the given config (" +
                                  expected_hash + ")");
            }
        };

        if (is_counts_file(args.inputs.front())) {
            if (args.inputs.size() != 1) {
                throw ConfigError("analyze: a rate-counts file is analyzed on its own");
            }
            const CountsFile file = read_counts(args.inputs.front());
            check_hash(file.header, args.inputs.front());
            summary = summarize_counts(file, opts, &curves);
        } else {
            RecordsHeader header;
            std::vector<uint64_t> seeds;
            std::vector<ShotRecord> records;
            for (size_t i = 0; i < args.inputs.size(); ++i) {
                RecordsFile f = read_records(std::filesystem::path(args.inputs[i]));
                check_hash(f.header, args.inputs[i]);
                if (i == 0) {
                    header = f.header;
                } else if (f.header.config_hash != header.config_hash || f.header.n != header.n ||
                           f.header.kind != header.kind) {
                    throw ConfigError(args.inputs[i] + ": records come from a different configuration than " +
                                      args.inputs.front());
                }
                seeds.push_back(f.header.seed);
                std::move(f.records.begin(), f.records.end(), std::back_inserter(records));
            }
            header.shots = records.size();
            summary = summarize_records(header, seeds, records, opts, &curves);
        }
        const auto dir = resolve_output_dir(args.out_dir, "", "photonchain-out");
        write_text(dir / "summary.json", dump_summary(summary));
        for (const auto &c : curves) {
            write_text(dir / c.name, c.text);
        }
        out << "wrote " << (dir / "summary.json").string() << '\n';
        return kExitOk;
    });
}

}  // namespace photonchain::cli
