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

// Desk-scale figure reproductions.
//
// Shot counts at --scale 1:
//   fig2    GHZ N = 2..14, 20000 Z shots and 25 x 2000 equator shots per N
//   fig3    cluster N = 2..10, 60000 shots per N in the two alternating settings
//   fig4    14-photon rate benchmark over 24 h of simulated wall clock
//   edfig3  coherence probe, 25 delays x 20000 shots; DD scan, 17 tau values
//           x 25000 shots, with and without the F=2 sign flip
// fig2 and fig3 condition on detection, so every shot is a full event.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "cli/commands.h"
#include "cli/records_io.h"

namespace photonchain::cli {

namespace {

using nlohmann::ordered_json;

struct Context {
    const ReproduceArgs &args;
    std::filesystem::path dir;
    std::ostream &out;

    uint64_t shots(uint64_t base) const {
        return std::max<uint64_t>(1, static_cast<uint64_t>(std::llround(static_cast<double>(base) * args.scale)));
    }
    NoiseConfig noise() const { return args.noiseless ? NoiseConfig{} : NoiseConfig::calibrated(); }
    void note(const std::string &msg) const {
        if (!args.quiet) {
            out << msg << '\n';
        }
    }
};

RunConfig base_config(const Context &ctx, ProtocolConfig protocol, const std::string &plan, uint64_t shots,
                      uint64_t seed) {
    RunConfig cfg;
    cfg.protocol = std::move(protocol);
    cfg.noise = ctx.noise();
    cfg.measurement.plan = plan;
    cfg.execution.shots = shots;
    cfg.execution.seed = seed;
    cfg.execution.threads = ctx.args.threads;
    cfg.execution.condition_on_detection = true;
    return cfg;
}

std::vector<ShotRecord> run_config(const Context &ctx, const RunConfig &cfg, const std::filesystem::path &subdir,
                                   const std::string &records_name) {
    const PulseSchedule schedule = build_schedule(cfg.protocol);
    RunOptions opts;
    opts.condition_on_detection = cfg.execution.condition_on_detection;
    opts.threads = cfg.execution.threads;
    auto records = run_batch(cfg.protocol, cfg.noise, cfg.measurement.basis_plan(cfg.protocol.n_photons),
                             cfg.execution.shots, cfg.execution.seed, opts);
    if (ctx.args.write_records) {
        const RecordsHeader h =
            header_for(cfg, schedule.run_period(cfg.protocol.timings.overhead, cfg.protocol.repetition_period));
        write_text(subdir / "config.json", to_json(cfg).dump(2) + "\n");
        write_records(subdir / records_name, h, records);
    }
    return records;
}

std::string n_dir(const std::string &prefix, int n) {
    std::string s = std::to_string(n);
    return prefix + (n < 10 ? "0" : "") + s;
}

ordered_json decay_block(const std::vector<DecayPoint> &points) {
    try {
        return decay_json(decay_fit(points));
    } catch (const std::exception &e) {
        return {{"error", e.what()}};
    }
}

std::string est_cols(const Estimate &e) {
    return format_double(e.value) + "\t" + format_double(e.std_err) + "\t" + std::to_string(e.n_events);
}

void fig2(const Context &ctx) {
    ordered_json table = ordered_json::array();
    std::vector<DecayPoint> fid;
    std::ostringstream tsv;
    tsv << "n\tP\tP_stderr\tP_events\tC\tC_stderr\tC_events\tF\tF_stderr\tF_events\twitness\twitness_stderr\n";
    for (int n = 2; n <= 14; ++n) {
        const auto sub = ctx.dir / n_dir("ghz_n", n);
        const uint64_t seed = ctx.args.seed + static_cast<uint64_t>(100 * n);
        RunConfig zc = base_config(ctx, ProtocolConfig::ghz(n), "z", ctx.shots(20000), seed);
        RunConfig pc = base_config(ctx, ProtocolConfig::ghz(n), "parity", ctx.shots(50000), seed + 1);
        auto records = run_config(ctx, zc, sub, "records_z.tsv");
        auto par = run_config(ctx, pc, sub, "records_parity.tsv");
        std::move(par.begin(), par.end(), std::back_inserter(records));

        const Estimate p = populations(records, n);
        const CoherenceFit c = fit_coherence(parity_curve(records), n);
        const Estimate f = ghz_fidelity(p, c.amplitude);
        const WitnessResult w = ghz_witness(records, records);
        fid.push_back({n, f});
        table.push_back({{"n", n},
                         {"populations", estimate_json(p)},
                         {"coherence", estimate_json(c.amplitude)},
                         {"fidelity", estimate_json(f)},
                         {"ghz_witness", estimate_json(w.bound)}});
        tsv << n << '\t' << est_cols(p) << '\t' << est_cols(c.amplitude) << '\t' << est_cols(f) << '\t'
            << format_double(w.bound.value) << '\t' << format_double(w.bound.std_err) << '\n';
        if (ctx.args.write_records) {
            const uint64_t seeds[] = {zc.execution.seed, pc.execution.seed};
            std::vector<CurveFile> curves;
            RecordsHeader merged = header_for(
                zc, build_schedule(zc.protocol).run_period(zc.protocol.timings.overhead,
                                                           zc.protocol.repetition_period));
            merged.shots = records.size();
            write_text(sub / "summary.json", dump_summary(summarize_records(merged, seeds, records, {}, &curves)));
            for (const auto &cf : curves) {
                write_text(sub / cf.name, cf.text);
            }
        }
        std::ostringstream msg;
        msg << "fig2 N=" << n << ": P=" << p.value << " C=" << c.amplitude.value << " F=" << f.value;
        ctx.note(msg.str());
    }
    ordered_json s;
    s["figure"] = "fig2";
    s["noise"] = ctx.args.noiseless ? "ideal" : "calibrated";
    s["seed"] = ctx.args.seed;
    s["per_n"] = table;
    s["fidelity_decay"] = decay_block(fid);
    write_text(ctx.dir / "summary.json", dump_summary(s));
    write_text(ctx.dir / "ghz_table.tsv", tsv.str());
}

void fig3(const Context &ctx) {
    ordered_json table = ordered_json::array();
    std::vector<DecayPoint> bounds;
    std::ostringstream tsv;
    tsv << "n\tbound\tbound_stderr\tevents\tbound_from_stabilizers\tbound_from_stabilizers_stderr\n";
    std::ostringstream stab_tsv;
    stab_tsv << "n\tk\tS\tS_stderr\tevents\n";
    for (int n = 2; n <= 10; ++n) {
        const auto sub = ctx.dir / n_dir("cluster_n", n);
        RunConfig cfg = base_config(ctx, ProtocolConfig::cluster(n), "cluster", ctx.shots(60000),
                                    ctx.args.seed + static_cast<uint64_t>(100 * n));
        const auto records = run_config(ctx, cfg, sub, "records.tsv");
        const WitnessResult w = cluster_witness(records, n);
        const std::vector<Estimate> s = stabilizers(records, n);
        ordered_json from_s = nullptr;
        Estimate fs;
        try {
            fs = cluster_witness_from_stabilizers(s).bound;
            from_s = estimate_json(fs);
        } catch (const InsufficientDataError &) {
        }
        ordered_json sj = ordered_json::array();
        for (size_t k = 0; k < s.size(); ++k) {
            sj.push_back(estimate_json(s[k]));
            stab_tsv << n << '\t' << k + 1 << '\t' << est_cols(s[k]) << '\n';
        }
        bounds.push_back({n, w.bound});
        table.push_back({{"n", n},
                         {"cluster_witness", estimate_json(w.bound)},
                         {"cluster_witness_from_stabilizers", from_s},
                         {"stabilizers", sj}});
        tsv << n << '\t' << est_cols(w.bound) << '\t' << format_double(fs.value) << '\t'
            << format_double(fs.std_err) << '\n';
        if (ctx.args.write_records) {
            const uint64_t seeds[] = {cfg.execution.seed};
            RecordsHeader h = header_for(
                cfg, build_schedule(cfg.protocol).run_period(cfg.protocol.timings.overhead,
                                                             cfg.protocol.repetition_period));
            write_text(sub / "summary.json", dump_summary(summarize_records(h, seeds, records, {})));
        }
        std::ostringstream msg;
        msg << "fig3 N=" << n << ": witness bound " << w.bound.value << " +- " << w.bound.std_err;
        ctx.note(msg.str());
    }
    ordered_json s;
    s["figure"] = "fig3";
    s["noise"] = ctx.args.noiseless ? "ideal" : "calibrated";
    s["seed"] = ctx.args.seed;
    s["per_n"] = table;
    s["bound_decay"] = decay_block(bounds);
    write_text(ctx.dir / "summary.json", dump_summary(s));
    write_text(ctx.dir / "cluster_table.tsv", tsv.str());
    write_text(ctx.dir / "stabilizers.tsv", stab_tsv.str());
}

void fig4(const Context &ctx) {
    RunConfig cfg;
    cfg.protocol = ProtocolConfig::rate_benchmark(14);
    cfg.noise = ctx.noise();
    cfg.execution.seed = ctx.args.seed;
    cfg.execution.threads = ctx.args.threads;
    cfg.execution.duration = 24.0 * 3600.0 * ctx.args.scale;
    const RateCounts counts = rate_benchmark(cfg.protocol, cfg.noise, cfg.execution.duration, cfg.execution.seed,
                                             cfg.execution.threads);
    RecordsHeader h = header_for(cfg, counts.period);
    h.shots = counts.runs;
    CountsFile file{h, counts};
    std::vector<CurveFile> curves;
    ordered_json s = summarize_counts(file, {}, &curves);
    s["configured_eta"] = cfg.noise.eta();
    s["rate_14_per_minute"] = counts.rate_per_minute(14);
    write_text(ctx.dir / "config.json", to_json(cfg).dump(2) + "\n");
    write_counts(ctx.dir / cfg.output.counts, h, counts);
    write_text(ctx.dir / "summary.json", dump_summary(s));
    for (const auto &cf : curves) {
        write_text(ctx.dir / cf.name, cf.text);
    }
    std::ostringstream msg;
    msg << "fig4: " << counts.runs << " runs, 14-fold rate " << counts.rate_per_minute(14) << " per minute, eta "
        << s["eta"]["value"].get<double>() << " (configured " << cfg.noise.eta() << ")";
    ctx.note(msg.str());
}

void edfig3(const Context &ctx) {
    const NoiseConfig noise = ctx.noise();
    ordered_json probe = ordered_json::array();
    std::ostringstream probe_tsv;
    probe_tsv << "delay\toverlap\toverlap_stderr\tevents\n";
    for (int k = 0; k <= 24; ++k) {
        const double delay = 1e-4 * k;
        const CoherencePoint pt = coherence_probe(delay, noise, ctx.shots(20000),
                                                  ctx.args.seed + static_cast<uint64_t>(k), {}, ctx.args.threads);
        probe.push_back({{"delay", pt.delay}, {"overlap", estimate_json(pt.overlap)}});
        probe_tsv << format_double(pt.delay) << '\t' << est_cols(pt.overlap) << '\n';
    }
    const double crossing =
        coherence_crossing(noise, 0.0, 2.4e-3, 1e-4, ctx.shots(20000), ctx.args.seed + 1000, kClassicalThreshold,
                           {}, ctx.args.threads);
    ctx.note("edfig3: probe envelope crosses " + std::to_string(kClassicalThreshold) + " at " +
             std::to_string(crossing * 1e3) + " ms");

    std::vector<double> taus;
    for (int k = 0; k <= 16; ++k) {
        taus.push_back(10e-6 * k);
    }
    ZeemanModel no_flip;
    no_flip.g_f2 = 1.0;
    const auto flip = dd_scan(taus, noise, ctx.shots(25000), ctx.args.seed + 2000, {}, 25, ctx.args.threads);
    const auto plain = dd_scan(taus, noise, ctx.shots(25000), ctx.args.seed + 3000, no_flip, 25, ctx.args.threads);
    ordered_json dd = ordered_json::array();
    std::ostringstream dd_tsv;
    dd_tsv << "tau\tvisibility\tvisibility_stderr\tevents\tvisibility_no_flip\tvisibility_no_flip_stderr\n";
    size_t best = 0;
    for (size_t i = 0; i < taus.size(); ++i) {
        if (flip[i].fit.amplitude.value > flip[best].fit.amplitude.value) {
            best = i;
        }
        dd.push_back({{"tau", taus[i]},
                      {"visibility", estimate_json(flip[i].fit.amplitude)},
                      {"visibility_no_flip", estimate_json(plain[i].fit.amplitude)}});
        dd_tsv << format_double(taus[i]) << '\t' << est_cols(flip[i].fit.amplitude) << '\t'
               << format_double(plain[i].fit.amplitude.value) << '\t'
               << format_double(plain[i].fit.amplitude.std_err) << '\n';
    }
    ctx.note("edfig3: DD visibility peaks at tau = " + std::to_string(taus[best] * 1e6) + " us");

    ordered_json s;
    s["figure"] = "edfig3";
    s["noise"] = ctx.args.noiseless ? "ideal" : "calibrated";
    s["seed"] = ctx.args.seed;
    s["coherence_probe"] = probe;
    s["crossing_delay"] = std::isfinite(crossing) ? ordered_json(crossing) : ordered_json(nullptr);
    s["dd_scan"] = dd;
    s["best_tau"] = taus[best];
    s["interior_maximum"] = best > 0 && best + 1 < taus.size();
    write_text(ctx.dir / "summary.json", dump_summary(s));
    write_text(ctx.dir / "coherence_curve.tsv", probe_tsv.str());
    write_text(ctx.dir / "dd_curve.tsv", dd_tsv.str());
}

}  // namespace

int cmd_reproduce(const ReproduceArgs &args, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        static const std::vector<std::string> figures = {"fig2", "fig3", "fig4", "edfig3"};
        if (std::find(figures.begin(), figures.end(), args.figure) == figures.end()) {
            throw ConfigError("unknown figure '" + args.figure + "' (expected fig2, fig3, fig4 or edfig3)");
        }
        if (!(args.scale > 0.0)) {
            throw ConfigError("--scale must be positive");
        }
        if (args.threads < 1) {
            throw ConfigError("--threads must be at least 1");
        }
        const auto root = resolve_output_dir(args.out_dir, "", "photonchain-out");
        const Context ctx{args, root / args.figure, out};
        const auto start = std::chrono::steady_clock::now();
        if (args.figure == "fig2") {
            fig2(ctx);
        } else if (args.figure == "fig3") {
            fig3(ctx);
        } else if (args.figure == "fig4") {
            fig4(ctx);
        } else {
            edfig3(ctx);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!args.quiet) {
            out << "wrote " << ctx.dir.string() << " in " << secs << " s\n";
        }
        return kExitOk;
    });
}

}  // namespace photonchain::cli
