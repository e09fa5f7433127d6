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

#include "photonchain/engine.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace photonchain {

namespace {

constexpr double kNormDriftLimit = 1e-9;
constexpr uint64_t kRateBlock = uint64_t{1} << 16;

/// Runs fn(begin, end) over [0, count) split into contiguous chunks.
template <typename Fn>
void parallel_for(uint64_t count, int threads, Fn fn) {
    const uint64_t workers = std::max<uint64_t>(1, std::min<uint64_t>(static_cast<uint64_t>(std::max(threads, 1)), count));
    if (workers == 1) {
        fn(uint64_t{0}, count);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        const uint64_t chunk = (count + workers - 1) / workers;
        for (uint64_t w = 0; w < workers; ++w) {
            const uint64_t begin = w * chunk;
            const uint64_t end = std::min(count, begin + chunk);
            if (begin >= end) {
                break;
            }
            pool.emplace_back([&, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

class ShotRunner {
   public:
    ShotRunner(const PulseSchedule &schedule, const NoiseConfig &noise, std::span<const MeasBasis> bases, Rng &rng,
               const RunOptions &options, ShotRecord &record)
        : schedule_(schedule),
          noise_(noise),
          bases_(bases),
          rng_(rng),
          options_(options),
          record_(record),
          strict_(noise.raman_sigma == 0.0 && noise.closing_scatter_p == 0.0) {}

    void start() {
        delta_ = sample_field(rng_, noise_).delta;
        record_.field_delta = delta_;
    }

    void run(const Step &st) {
        if (st.cycle != cycle_) {
            cycle_ = st.cycle;
            if (noise_.b_model == FieldModel::kPerCycle) {
                delta_ = sample_field(rng_, noise_).delta;
            }
        }
        switch (st.kind) {
            case Step::Kind::kPump:
                atom_ = AtomKet::basis(level::k20);
                emitted_ = false;
                break;
            case Step::Kind::kWait:
                precess(st.duration, st.lab_frame);
                break;
            case Step::Kind::kRaman: {
                const double theta = perturb_rotation(st.theta, rng_, noise_);
                precess(st.duration / 2.0, false);
                atom_ = raman_rotation(atom_, st.a, st.b, theta, st.phase);
                precess(st.duration / 2.0, false);
                break;
            }
            case Step::Kind::kClosingScatter:
                atom_ = apply_closing_scatter(atom_, rng_, noise_).state;
                break;
            case Step::Kind::kEmit:
                emit(EmissionMap::get(st.emission));
                break;
            case Step::Kind::kMeasure:
                measure(static_cast<size_t>(st.slot));
                break;
        }
        if (std::abs(atom_.norm_squared() - 1.0) > kNormDriftLimit) {
            throw NumericalIntegrityError("atomic state norm drifted beyond 1e-9 during '" + to_string(st.kind) + "'");
        }
    }

   private:
    void precess(double duration, bool lab_frame) {
        if (lab_frame) {
            atom_ = larmor_precess(atom_, duration, delta_, schedule_.zeeman);
        } else if (delta_ != 0.0) {
            atom_ = larmor_precess_offset(atom_, duration, delta_, schedule_.zeeman);
        }
    }

    void emit(const EmissionMap &map) {
        if (strict_) {
            joint_ = map.apply(atom_);
            emitted_ = true;
            return;
        }
        // Population outside the emitting levels stays dark: the control
        // pulse either produces a photon (projecting onto the emitting
        // levels) or nothing happens.
        const double p_active = map.active_population(atom_);
        if (p_active >= 1.0 - 1e-12) {
            joint_ = map.apply_unchecked(atom_);
            emitted_ = true;
        } else if (rng_.uniform() < p_active) {
            atom_ = map.project_active(atom_);
            atom_.normalize();
            joint_ = map.apply_unchecked(atom_);
            emitted_ = true;
        } else {
            atom_ = map.project_inactive(atom_);
            atom_.normalize();
            emitted_ = false;
        }
    }

    void measure(size_t slot) {
        PhotonRecord &out = record_.photons[slot];
        out.basis = bases_[slot];
        out.detected = false;
        out.outcome = 0;
        if (!emitted_) {
            return;
        }
        emitted_ = false;
        const bool detected = options_.condition_on_detection || sample_detection(rng_, noise_);
        if (detected) {
            const auto m = measure_photon(joint_, bases_[slot], rng_, schedule_.frame[slot]);
            atom_ = m.atom;
            out.detected = true;
            out.outcome = m.outcome;
        } else {
            // Lost photon: trace it out by sampling a discarded Z outcome.
            atom_ = measure_photon(joint_, MeasBasis::z(), rng_).atom;
        }
    }

    const PulseSchedule &schedule_;
    const NoiseConfig &noise_;
    std::span<const MeasBasis> bases_;
    Rng &rng_;
    const RunOptions &options_;
    ShotRecord &record_;
    const bool strict_;

    AtomKet atom_ = AtomKet::basis(level::k20);
    JointKet joint_;
    bool emitted_ = false;
    double delta_ = 0.0;
    int cycle_ = 0;
};

}  // namespace

ShotRecord run_shot(const PulseSchedule &schedule, const NoiseConfig &noise, std::span<const MeasBasis> bases,
                    Rng &rng, const RunOptions &options) {
    const auto n = static_cast<size_t>(schedule.n_photons);
    if (bases.size() != n) {
        throw std::invalid_argument("run_shot: need one measurement basis per photon");
    }
    ShotRecord rec;
    rec.photons.resize(n);
    for (size_t i = 0; i < n; ++i) {
        rec.photons[i].basis = bases[i];
    }

    const auto &steps = schedule.steps;
    const auto first_measure = static_cast<size_t>(
        std::find_if(steps.begin(), steps.end(), [](const Step &s) { return s.kind == Step::Kind::kMeasure; }) -
        steps.begin());
    if (first_measure == steps.size()) {
        throw std::invalid_argument("run_shot: schedule has no measurement");
    }

    ShotRunner runner(schedule, noise, bases, rng, options, rec);
    runner.start();

    // Initialization and first photon, retried from pumping until detected.
    bool first_ok = false;
    int attempt = 0;
    while (attempt < schedule.max_first_attempts && !first_ok) {
        ++attempt;
        for (size_t i = 0; i <= first_measure; ++i) {
            runner.run(steps[i]);
        }
        first_ok = rec.photons[0].detected;
    }
    rec.first_photon_attempts = attempt;
    if (!first_ok) {
        rec.void_shot = true;
        for (auto &p : rec.photons) {
            p.detected = false;
            p.outcome = 0;
        }
        return rec;
    }
    for (size_t i = first_measure + 1; i < steps.size(); ++i) {
        runner.run(steps[i]);
    }
    return rec;
}

std::vector<ShotRecord> run_batch(const ProtocolConfig &cfg, const NoiseConfig &noise, const BasisPlan &plan,
                                  uint64_t shots, uint64_t seed, const RunOptions &options) {
    if (shots < 1) {
        throw std::invalid_argument("run_batch: shots must be at least 1");
    }
    if (plan.settings.empty()) {
        throw std::invalid_argument("run_batch: empty basis plan");
    }
    noise.validate();
    const PulseSchedule schedule = build_schedule(cfg);
    const double period = schedule.run_period(cfg.timings.overhead, cfg.repetition_period);
    std::vector<ShotRecord> records(shots);
    parallel_for(shots, options.threads, [&](uint64_t begin, uint64_t end) {
        for (uint64_t j = begin; j < end; ++j) {
            const uint64_t i = options.first_shot + j;
            Rng rng = Rng::stream(seed, i);
            ShotRecord rec = run_shot(schedule, noise, plan.for_shot(i), rng, options);
            rec.run_id = i;
            rec.wall_clock_offset = static_cast<double>(i) * period;
            records[j] = std::move(rec);
        }
    });
    return records;
}

RateCounts rate_benchmark(const ProtocolConfig &cfg, const NoiseConfig &noise, double duration, uint64_t seed,
                          int threads) {
    if (cfg.kind != ProtocolKind::kRateBenchmark) {
        throw std::invalid_argument("rate_benchmark needs a rate protocol config");
    }
    if (!(duration > 0.0)) {
        throw std::invalid_argument("rate_benchmark duration must be positive");
    }
    noise.validate();
    const PulseSchedule schedule = build_schedule(cfg);
    RateCounts out;
    out.max_n = cfg.n_photons;
    out.duration = duration;
    out.period = schedule.run_period(cfg.timings.overhead, cfg.repetition_period);
    out.runs = static_cast<uint64_t>(std::floor(duration / out.period));

    const double eta = noise.eta();
    const auto max_n = static_cast<size_t>(cfg.n_photons);
    const uint64_t blocks = (out.runs + kRateBlock - 1) / kRateBlock;
    std::vector<std::vector<uint64_t>> hist(blocks, std::vector<uint64_t>(max_n + 1, 0));
    parallel_for(blocks, threads, [&](uint64_t begin, uint64_t end) {
        for (uint64_t b = begin; b < end; ++b) {
            Rng rng = Rng::stream(seed, b);
            const uint64_t first = b * kRateBlock;
            const uint64_t last = std::min(out.runs, first + kRateBlock);
            for (uint64_t r = first; r < last; ++r) {
                // Length of the detected run starting at the first attempt.
                size_t len = 0;
                while (len < max_n && (eta >= 1.0 || rng.uniform() < eta)) {
                    ++len;
                }
                ++hist[b][len];
            }
        }
    });
    std::vector<uint64_t> total(max_n + 1, 0);
    for (const auto &h : hist) {
        for (size_t i = 0; i <= max_n; ++i) {
            total[i] += h[i];
        }
    }
    out.counts.assign(max_n, 0);
    uint64_t at_least = 0;
    for (size_t len = max_n; len >= 1; --len) {
        at_least += total[len];
        out.counts[len - 1] = at_least;
    }
    return out;
}

int coherence_reference_product() {
    const JointKet first = emit_initial(AtomKet::basis(level::k20));
    AtomKet atom = project_photon(first, MeasBasis::x(), +1);
    atom.normalize();
    const JointKet second = emit_closing(closing_transfer(atom));
    return outcome_probability(second, MeasBasis::x(), +1) > 0.5 ? +1 : -1;
}

Estimate coherence_overlap(std::span<const ShotRecord> records) {
    static const int reference = coherence_reference_product();
    uint64_t events = 0;
    uint64_t matches = 0;
    for (const auto &r : records) {
        if (r.photons.size() != 2 || !r.all_detected()) {
            continue;
        }
        ++events;
        if (r.photons[0].outcome * r.photons[1].outcome == reference) {
            ++matches;
        }
    }
    Estimate e;
    e.n_events = events;
    if (events > 0) {
        const double p = static_cast<double>(matches) / static_cast<double>(events);
        e.value = p;
        e.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(events));
    }
    return e;
}

CoherencePoint coherence_probe(double delay, const NoiseConfig &noise, uint64_t shots, uint64_t seed,
                               const ZeemanModel &zeeman, int threads) {
    ProtocolConfig cfg = ProtocolConfig::coherence_probe(delay);
    cfg.zeeman = zeeman;
    RunOptions opts;
    opts.condition_on_detection = true;
    opts.threads = threads;
    const auto records = run_batch(cfg, noise, BasisPlan::uniform(2, MeasBasis::x()), shots, seed, opts);
    CoherencePoint pt;
    pt.delay = delay;
    pt.overlap = coherence_overlap(records);
    return pt;
}

double coherence_crossing(const NoiseConfig &noise, double t_min, double t_max, double step, uint64_t shots,
                          uint64_t seed, double threshold, const ZeemanModel &zeeman, int threads) {
    if (!(step > 0.0) || !(t_max > t_min) || t_min < 0.0) {
        throw std::invalid_argument("coherence_crossing: invalid delay grid");
    }
    const double half_period = std::numbers::pi / zeeman.larmor_angular;
    double prev_t = 0.0;
    double prev_v = 1.0;
    bool have_prev = false;
    uint64_t k = 0;
    for (double t = t_min; t <= t_max + 1e-15; t += step, ++k) {
        const double snapped = std::round(t / half_period) * half_period;
        const double v = coherence_probe(snapped, noise, shots, splitmix64(seed + k), zeeman, threads).overlap.value;
        if (v < threshold) {
            if (!have_prev) {
                return snapped;
            }
            return prev_t + (prev_v - threshold) / (prev_v - v) * (snapped - prev_t);
        }
        prev_t = snapped;
        prev_v = v;
        have_prev = true;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<DdPoint> dd_scan(std::span<const double> taus, const NoiseConfig &noise, uint64_t shots_per_tau,
                             uint64_t seed, const ZeemanModel &zeeman, int phi_points, int threads) {
    std::vector<DdPoint> out;
    RunOptions opts;
    opts.condition_on_detection = true;
    opts.threads = threads;
    uint64_t k = 0;
    for (double tau : taus) {
        ProtocolConfig cfg = ProtocolConfig::dd_scan(tau);
        cfg.zeeman = zeeman;
        const auto records =
            run_batch(cfg, noise, BasisPlan::parity_grid(cfg.n_photons, phi_points), shots_per_tau, splitmix64(seed + k++), opts);
        out.push_back({tau, fit_coherence(parity_curve(records), cfg.n_photons)});
    }
    return out;
}

}  // namespace photonchain
