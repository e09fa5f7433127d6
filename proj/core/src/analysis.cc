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

#include "photonchain/analysis.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace photonchain {

namespace {

constexpr double kPhiTolerance = 1e-12;

Estimate binomial(uint64_t hits, uint64_t events) {
    Estimate e;
    e.n_events = events;
    if (events == 0) {
        return e;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(events);
    e.value = p;
    e.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(events));
    return e;
}

/// Mean of a +/-1 observable.
Estimate sign_mean(int64_t sum, uint64_t events) {
    Estimate e;
    e.n_events = events;
    if (events == 0) {
        return e;
    }
    const double m = static_cast<double>(sum) / static_cast<double>(events);
    e.value = m;
    e.std_err = std::sqrt(std::max(0.0, 1.0 - m * m) / static_cast<double>(events));
    return e;
}

bool all_basis(const ShotRecord &r, auto pred) {
    return std::all_of(r.photons.begin(), r.photons.end(), [&](const PhotonRecord &p) { return pred(p.basis); });
}

int outcome_product(const ShotRecord &r, size_t first, size_t last) {
    int prod = 1;
    for (size_t i = first; i <= last; ++i) {
        prod *= r.photons[i].outcome;
    }
    return prod;
}

struct Linear2 {
    std::array<double, 2> beta{};
    std::array<std::array<double, 2>, 2> cov{};
};

/// Least squares for y = b0 x0 + b1 x1. Weighted by 1/sigma^2 when sigmas
/// are positive; if every sigma is zero, unweighted with the covariance
/// scaled by the residual variance. Zero sigmas among positive ones are
/// raised to the smallest positive sigma.
Linear2 fit_linear2(const std::vector<std::array<double, 2>> &x, const std::vector<double> &y,
                    std::vector<double> sigma) {
    const size_t m = y.size();
    double min_pos = 0.0;
    for (double s : sigma) {
        if (s > 0.0 && (min_pos == 0.0 || s < min_pos)) {
            min_pos = s;
        }
    }
    const bool weighted = min_pos > 0.0;
    std::array<std::array<double, 2>, 2> a{};
    std::array<double, 2> rhs{};
    for (size_t i = 0; i < m; ++i) {
        const double w = weighted ? 1.0 / std::pow(std::max(sigma[i], min_pos), 2) : 1.0;
        for (int r = 0; r < 2; ++r) {
            rhs[r] += w * x[i][r] * y[i];
            for (int c = 0; c < 2; ++c) {
                a[r][c] += w * x[i][r] * x[i][c];
            }
        }
    }
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const double scale = std::abs(a[0][0] * a[1][1]) + std::abs(a[0][1] * a[1][0]);
    if (!(scale > 0.0) || std::abs(det) <= 1e-12 * scale) {
        throw FitError("degenerate design: fit parameters are not identifiable");
    }
    Linear2 out;
    out.cov = {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
    out.beta = {out.cov[0][0] * rhs[0] + out.cov[0][1] * rhs[1], out.cov[1][0] * rhs[0] + out.cov[1][1] * rhs[1]};
    if (!weighted) {
        double rss = 0.0;
        for (size_t i = 0; i < m; ++i) {
            const double r = y[i] - out.beta[0] * x[i][0] - out.beta[1] * x[i][1];
            rss += r * r;
        }
        const double s2 = m > 2 ? rss / static_cast<double>(m - 2) : 0.0;
        for (auto &row : out.cov) {
            for (double &v : row) {
                v *= s2;
            }
        }
    }
    return out;
}

std::string setting_label(const std::vector<MeasBasis> &setting) {
    std::string s;
    for (const auto &b : setting) {
        if (!s.empty()) {
            s += ' ';
        }
        s += b.code();
    }
    return s;
}

/// Fraction of fully detected events in the setting for which every listed
/// stabilizer (0-based centre index) evaluates to +1.
Estimate stabilizer_product_term(std::span<const ShotRecord> records, const std::vector<MeasBasis> &setting,
                                 const std::vector<size_t> &centres) {
    const size_t n = setting.size();
    uint64_t events = 0;
    uint64_t hits = 0;
    for (const auto &r : records) {
        if (!r.in_setting(setting) || !r.all_detected()) {
            continue;
        }
        ++events;
        bool all_plus = true;
        for (size_t k : centres) {
            const size_t lo = k == 0 ? 0 : k - 1;
            const size_t hi = std::min(n - 1, k + 1);
            if (outcome_product(r, lo, hi) != 1) {
                all_plus = false;
                break;
            }
        }
        hits += all_plus ? 1 : 0;
    }
    return binomial(hits, events);
}

}  // namespace

Estimate populations(std::span<const ShotRecord> records, int n) {
    uint64_t events = 0;
    uint64_t hits = 0;
    for (const auto &r : records) {
        if (static_cast<int>(r.photons.size()) != n || !all_basis(r, [](const MeasBasis &b) { return b.is_z(); }) ||
            !r.all_detected()) {
            continue;
        }
        ++events;
        const int first = r.photons.front().outcome;
        hits += std::all_of(r.photons.begin(), r.photons.end(), [&](const PhotonRecord &p) { return p.outcome == first; })
                    ? 1
                    : 0;
    }
    if (events == 0) {
        throw InsufficientDataError("populations: no fully detected Z-basis events");
    }
    return binomial(hits, events);
}

Estimate parity(std::span<const ShotRecord> records, double phi) {
    uint64_t events = 0;
    int64_t sum = 0;
    for (const auto &r : records) {
        const bool match = all_basis(r, [&](const MeasBasis &b) {
            return b.kind() == MeasBasis::Kind::Equator && std::abs(b.phi() - phi) <= kPhiTolerance;
        });
        if (!match || !r.all_detected()) {
            continue;
        }
        ++events;
        sum += outcome_product(r, 0, r.photons.size() - 1);
    }
    if (events == 0) {
        throw InsufficientDataError("parity: no fully detected events at phi = " + std::to_string(phi));
    }
    return sign_mean(sum, events);
}

ParityCurve parity_curve(std::span<const ShotRecord> records) {
    std::map<double, std::pair<uint64_t, int64_t>> by_phi;
    for (const auto &r : records) {
        if (r.photons.empty() || r.photons.front().basis.is_z()) {
            continue;
        }
        const double phi = r.photons.front().basis.phi();
        if (!all_basis(r, [&](const MeasBasis &b) { return b == r.photons.front().basis; }) || !r.all_detected()) {
            continue;
        }
        auto &acc = by_phi[phi];
        ++acc.first;
        acc.second += outcome_product(r, 0, r.photons.size() - 1);
    }
    ParityCurve curve;
    for (const auto &[phi, acc] : by_phi) {
        curve.push_back({phi, sign_mean(acc.second, acc.first)});
    }
    return curve;
}

CoherenceFit fit_coherence(const ParityCurve &curve, int n) {
    std::vector<std::array<double, 2>> x;
    std::vector<double> y;
    std::vector<double> sigma;
    uint64_t events = 0;
    for (const auto &pt : curve) {
        if (pt.parity.n_events == 0 && pt.parity.std_err == 0.0 && pt.parity.value == 0.0) {
            continue;
        }
        x.push_back({std::cos(n * pt.phi), std::sin(n * pt.phi)});
        y.push_back(pt.parity.value);
        // A point sitting exactly at +/-1 has zero binomial variance; floor
        // it at one event's worth so it cannot dominate the fit.
        double s = pt.parity.std_err;
        if (pt.parity.n_events > 0) {
            s = std::max(s, 1.0 / static_cast<double>(pt.parity.n_events));
        }
        sigma.push_back(s);
        events += pt.parity.n_events;
    }
    if (x.size() < 8) {
        throw FitError("fit_coherence needs at least 8 phase points");
    }
    const Linear2 f = fit_linear2(x, y, sigma);
    const double a = f.beta[0];
    const double b = f.beta[1];
    const double amp = std::hypot(a, b);
    CoherenceFit out;
    out.amplitude.value = amp;
    out.amplitude.n_events = events;
    out.offset = std::atan2(-b, a);
    if (amp > 0.0) {
        const double va = (a * a * f.cov[0][0] + b * b * f.cov[1][1] + 2 * a * b * f.cov[0][1]) / (amp * amp);
        const double vd =
            (b * b * f.cov[0][0] + a * a * f.cov[1][1] - 2 * a * b * f.cov[0][1]) / (amp * amp * amp * amp);
        out.amplitude.std_err = std::sqrt(std::max(0.0, va));
        out.offset_stderr = std::sqrt(std::max(0.0, vd));
    } else {
        out.amplitude.std_err = std::sqrt(std::max(0.0, (f.cov[0][0] + f.cov[1][1]) / 2));
        out.offset_stderr = std::numbers::pi;
    }
    return out;
}

Estimate ghz_fidelity(const Estimate &population, const Estimate &coherence) {
    Estimate f;
    f.value = (population.value + coherence.value) / 2;
    f.std_err = std::hypot(population.std_err, coherence.std_err) / 2;
    f.n_events = population.n_events + coherence.n_events;
    return f;
}

WitnessResult ghz_witness(std::span<const ShotRecord> records_x, std::span<const ShotRecord> records_z) {
    size_t n = 0;
    uint64_t x_events = 0;
    int64_t x_sum = 0;
    for (const auto &r : records_x) {
        if (!all_basis(r, [](const MeasBasis &b) { return b.is_x(); }) || !r.all_detected()) {
            continue;
        }
        n = r.photons.size();
        ++x_events;
        x_sum += outcome_product(r, 0, n - 1);
    }
    if (x_events == 0) {
        throw InsufficientDataError("ghz_witness: no fully detected X-setting events");
    }
    uint64_t z_events = 0;
    uint64_t z_equal = 0;
    std::vector<int64_t> pair_sums(n > 0 ? n - 1 : 0, 0);
    for (const auto &r : records_z) {
        if (r.photons.size() != n || !all_basis(r, [](const MeasBasis &b) { return b.is_z(); }) ||
            !r.all_detected()) {
            continue;
        }
        ++z_events;
        bool equal = true;
        for (size_t k = 1; k < n; ++k) {
            const int zz = r.photons[k - 1].outcome * r.photons[k].outcome;
            pair_sums[k - 1] += zz;
            equal = equal && zz == 1;
        }
        z_equal += equal ? 1 : 0;
    }
    if (z_events == 0) {
        throw InsufficientDataError("ghz_witness: no fully detected Z-setting events");
    }
    WitnessResult out;
    out.settings_used = {setting_label(std::vector<MeasBasis>(n, MeasBasis::x())),
                         setting_label(std::vector<MeasBasis>(n, MeasBasis::z()))};
    out.components.push_back(sign_mean(x_sum, x_events));
    for (int64_t s : pair_sums) {
        out.components.push_back(sign_mean(s, z_events));
    }
    // (1 + S_1)/2 is the even-parity fraction of the X events; the product of
    // (1 + Z Z)/2 terms is the all-equal indicator per Z event.
    const Estimate x_term = binomial(static_cast<uint64_t>((static_cast<int64_t>(x_events) + x_sum) / 2), x_events);
    const Estimate z_term = binomial(z_equal, z_events);
    out.bound.value = x_term.value + z_term.value - 1.0;
    out.bound.std_err = std::hypot(x_term.std_err, z_term.std_err);
    out.bound.n_events = x_events + z_events;
    return out;
}

std::vector<Estimate> stabilizers(std::span<const ShotRecord> records, int n) {
    std::vector<Estimate> out;
    const auto un = static_cast<size_t>(n);
    for (size_t k = 0; k < un; ++k) {
        const size_t lo = k == 0 ? 0 : k - 1;
        const size_t hi = std::min(un - 1, k + 1);
        uint64_t events = 0;
        int64_t sum = 0;
        for (const auto &r : records) {
            if (r.photons.size() != un) {
                continue;
            }
            bool ok = true;
            for (size_t i = lo; i <= hi && ok; ++i) {
                const auto &b = r.photons[i].basis;
                ok = (i == k ? b.is_x() : b.is_z()) && r.photons[i].detected;
            }
            if (!ok) {
                continue;
            }
            ++events;
            sum += outcome_product(r, lo, hi);
        }
        out.push_back(sign_mean(sum, events));
    }
    return out;
}

WitnessResult cluster_witness(std::span<const ShotRecord> records, int n) {
    if (n < 1) {
        throw InsufficientDataError("cluster_witness: need at least one photon");
    }
    WitnessResult out;
    Estimate terms[2];
    for (int parity = 0; parity < 2; ++parity) {
        // parity 0: centres 0, 2, 4, ... (X first); parity 1: centres 1, 3, ...
        std::vector<size_t> centres;
        for (auto k = static_cast<size_t>(parity); k < static_cast<size_t>(n); k += 2) {
            centres.push_back(k);
        }
        const auto setting = alternating_setting(n, parity == 0);
        if (centres.empty()) {
            terms[parity].value = 1.0;
            continue;
        }
        terms[parity] = stabilizer_product_term(records, setting, centres);
        if (terms[parity].empty()) {
            throw InsufficientDataError("cluster_witness: no fully detected events in setting " +
                                        setting_label(setting));
        }
        out.settings_used.push_back(setting_label(setting));
    }
    out.components = stabilizers(records, n);
    out.bound.value = terms[0].value + terms[1].value - 1.0;
    out.bound.std_err = std::hypot(terms[0].std_err, terms[1].std_err);
    out.bound.n_events = terms[0].n_events + terms[1].n_events;
    return out;
}

WitnessResult cluster_witness_from_stabilizers(std::span<const Estimate> s) {
    if (s.empty()) {
        throw InsufficientDataError("cluster_witness: no stabilizer estimates");
    }
    double prod[2] = {1.0, 1.0};
    double rel_var[2] = {0.0, 0.0};
    bool zero_factor[2] = {false, false};
    for (size_t k = 0; k < s.size(); ++k) {
        if (s[k].empty()) {
            throw InsufficientDataError("cluster_witness: missing stabilizer S_" + std::to_string(k + 1));
        }
        const double f = (1.0 + s[k].value) / 2;
        const double sf = s[k].std_err / 2;
        prod[k % 2] *= f;
        if (f > 0.0) {
            rel_var[k % 2] += (sf / f) * (sf / f);
        } else {
            zero_factor[k % 2] = true;
        }
    }
    WitnessResult out;
    out.components.assign(s.begin(), s.end());
    out.bound.value = prod[0] + prod[1] - 1.0;
    double var = 0.0;
    for (int p = 0; p < 2; ++p) {
        if (!zero_factor[p]) {
            var += prod[p] * prod[p] * rel_var[p];
        }
    }
    out.bound.std_err = std::sqrt(var);
    for (const auto &e : s) {
        out.bound.n_events += e.n_events;
    }
    return out;
}

RateFit rate_fit(std::span<const uint64_t> counts, double duration, double source_efficiency) {
    if (!(duration > 0.0)) {
        throw FitError("rate_fit: duration must be positive");
    }
    RateFit out;
    std::vector<std::array<double, 2>> x;
    std::vector<double> y;
    std::vector<double> sigma;
    for (size_t i = 0; i < counts.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        RatePoint pt;
        pt.n = n;
        pt.counts = counts[i];
        pt.rate = static_cast<double>(counts[i]) / duration;
        pt.rate_stderr = std::sqrt(static_cast<double>(counts[i])) / duration;
        out.points.push_back(pt);
        if (counts[i] == 0) {
            out.dropped.push_back(n);
            continue;
        }
        x.push_back({1.0, static_cast<double>(n)});
        y.push_back(std::log(pt.rate));
        sigma.push_back(1.0 / std::sqrt(static_cast<double>(counts[i])));
    }
    if (x.size() < 3) {
        throw FitError("rate_fit: fewer than 3 photon numbers with counts");
    }
    const Linear2 f = fit_linear2(x, y, sigma);
    out.prefactor = std::exp(f.beta[0]);
    const double eta = std::exp(f.beta[1]);
    out.eta.value = eta;
    out.eta.std_err = eta * std::sqrt(std::max(0.0, f.cov[1][1]));
    out.eta.n_events = counts.empty() ? 0 : counts[0];
    for (auto &pt : out.points) {
        pt.fitted_rate = out.prefactor * std::pow(eta, pt.n);
        pt.loss_corrected_rate = source_efficiency > 0.0 ? out.prefactor * std::pow(source_efficiency, pt.n) : 0.0;
    }
    return out;
}

DecayFit decay_fit(std::span<const DecayPoint> points) {
    if (points.size() < 3) {
        throw FitError("decay_fit needs at least 3 points");
    }
    std::vector<std::array<double, 2>> x;
    std::vector<double> y;
    std::vector<double> sigma;
    for (const auto &p : points) {
        x.push_back({1.0, static_cast<double>(p.n)});
        y.push_back(p.value.value);
        sigma.push_back(p.value.std_err);
    }
    const Linear2 f = fit_linear2(x, y, sigma);
    DecayFit out;
    out.intercept = f.beta[0];
    out.intercept_stderr = std::sqrt(std::max(0.0, f.cov[0][0]));
    out.decay_per_photon = -f.beta[1];
    out.decay_stderr = std::sqrt(std::max(0.0, f.cov[1][1]));
    if (out.decay_per_photon > 0.0) {
        const double d = out.decay_per_photon;
        const double c = (out.intercept - 0.5) / d;
        out.crossing_n = c;
        const double var = (f.cov[0][0] + c * c * f.cov[1][1] + 2 * c * f.cov[0][1]) / (d * d);
        out.crossing_stderr = std::sqrt(std::max(0.0, var));
    }
    return out;
}

}  // namespace photonchain
