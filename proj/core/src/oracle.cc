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

#include "photonchain/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace photonchain {

namespace {

using Mat2 = std::array<std::array<Complex, 2>, 2>;

constexpr double kPi = std::numbers::pi;
constexpr int kFramePhases = 64;
const Complex kI(0.0, 1.0);

struct EmissionTerm {
    Sublevel to;
    size_t pol;
    Complex coeff;
};

std::vector<EmissionTerm> emission_terms(EmissionKind kind, Sublevel from) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case EmissionKind::kInitial:
            if (from == level::k20) {
                return {{level::k1p1, 0, h}, {level::k1m1, 1, -h}};
            }
            break;
        case EmissionKind::kCycling:
            if (from == level::k2p2) {
                return {{level::k1p1, 0, 1.0}};
            }
            if (from == level::k2m2) {
                return {{level::k1m1, 1, 1.0}};
            }
            break;
        case EmissionKind::kClosing:
            if (from == level::k2m1) {
                return {{level::k10, 0, 1.0}};
            }
            if (from == level::k2p1) {
                return {{level::k10, 1, -1.0}};
            }
            break;
    }
    return {};
}

DenseState emit(const DenseState &st, EmissionKind kind) {
    DenseState out(st.n_photons() + 1);
    const size_t dim = st.photon_dim();
    double dark = 0.0;
    for (size_t a = 0; a < kNumSublevels; ++a) {
        const auto terms = emission_terms(kind, Sublevel::from_index(a));
        for (uint64_t b = 0; b < dim; ++b) {
            const Complex x = st.at(a, b);
            if (terms.empty()) {
                dark += std::norm(x);
                continue;
            }
            for (const auto &t : terms) {
                out.at(t.to.index(), (b << 1) | t.pol) += t.coeff * x;
            }
        }
    }
    if (dark > 1e-9) {
        throw EmissionLevelError("dense_run: population outside the emitting levels");
    }
    return out;
}

AtomOperator diagonal_precession(double duration, double delta, bool lab_frame, const ZeemanModel &z) {
    AtomOperator op{};
    const double scale = lab_frame ? 1.0 + delta : delta;
    for (size_t i = 0; i < kNumSublevels; ++i) {
        op[i][i] = std::polar(1.0, -z.phase_rate(Sublevel::from_index(i)) * scale * duration);
    }
    return op;
}

AtomOperator rotation(Sublevel a, Sublevel b, double theta, double phase) {
    AtomOperator op{};
    for (size_t i = 0; i < kNumSublevels; ++i) {
        op[i][i] = 1.0;
    }
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const size_t ia = a.index();
    const size_t ib = b.index();
    op[ia][ia] = c;
    op[ib][ib] = c;
    op[ia][ib] = -kI * s * std::polar(1.0, -phase);
    op[ib][ia] = -kI * s * std::polar(1.0, phase);
    return op;
}

Mat2 correction_matrix(const LocalCorrection &c) {
    const Complex e = std::polar(1.0, c.phase);
    if (!c.hadamard) {
        return {{{1.0, 0.0}, {0.0, e}}};
    }
    const double h = 1.0 / std::sqrt(2.0);
    return {{{h, h}, {h * e, -h * e}}};
}

Mat2 inverse_correction_matrix(const LocalCorrection &c) {
    const Mat2 m = correction_matrix(c);
    return {{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

Mat2 pauli_matrix(char op) {
    switch (op) {
        case 'I':
            return {{{1.0, 0.0}, {0.0, 1.0}}};
        case 'X':
            return {{{0.0, 1.0}, {1.0, 0.0}}};
        case 'Y':
            return {{{0.0, -kI}, {kI, 0.0}}};
        case 'Z':
            return {{{1.0, 0.0}, {0.0, -1.0}}};
        default:
            throw std::invalid_argument(std::string("unknown Pauli operator '") + op + "'");
    }
}

double generator_sum(const DenseState &st, const std::vector<PauliString> &gens) {
    double total = 0.0;
    for (const auto &g : gens) {
        total += pauli_expectation(st, g);
    }
    return total;
}

void check_size(int n) {
    if (n < 0 || n > kOracleMaxPhotons) {
        throw OracleSizeError("dense oracle supports at most " + std::to_string(kOracleMaxPhotons) + " photons");
    }
}

}  // namespace

DenseState::DenseState(int n_photons) : n_(n_photons) {
    check_size(n_photons);
    amp_.assign(kNumSublevels << n_photons, Complex(0.0));
}

DenseState DenseState::from_atom(const AtomKet &atom) {
    DenseState st(0);
    for (size_t a = 0; a < kNumSublevels; ++a) {
        st.at(a, 0) = atom.amp[a];
    }
    return st;
}

DenseState DenseState::from_photons(std::span<const Complex> photons, Sublevel atom) {
    if (!std::has_single_bit(photons.size())) {
        throw std::invalid_argument("from_photons: size must be a power of two");
    }
    DenseState st(std::countr_zero(photons.size()));
    for (uint64_t b = 0; b < photons.size(); ++b) {
        st.at(atom.index(), b) = photons[b];
    }
    return st;
}

DenseState DenseState::from_mixture(std::span<const std::vector<Complex>> components) {
    if (components.empty() || components.size() > kNumSublevels) {
        throw std::invalid_argument("from_mixture: need between 1 and 8 components");
    }
    const size_t dim = components.front().size();
    if (!std::has_single_bit(dim)) {
        throw std::invalid_argument("from_mixture: size must be a power of two");
    }
    DenseState st(std::countr_zero(dim));
    for (size_t i = 0; i < components.size(); ++i) {
        if (components[i].size() != dim) {
            throw std::invalid_argument("from_mixture: components differ in size");
        }
        for (uint64_t b = 0; b < dim; ++b) {
            st.at(i, b) = components[i][b];
        }
    }
    const double norm = std::sqrt(st.norm_squared());
    if (!(norm > 0.0)) {
        throw std::invalid_argument("from_mixture: zero state");
    }
    for (auto &x : st.amp_) {
        x /= norm;
    }
    return st;
}

double DenseState::norm_squared() const {
    double s = 0.0;
    for (const auto &x : amp_) {
        s += std::norm(x);
    }
    return s;
}

double DenseState::atom_purity() const {
    const size_t dim = photon_dim();
    double purity = 0.0;
    for (size_t a = 0; a < kNumSublevels; ++a) {
        for (size_t c = 0; c < kNumSublevels; ++c) {
            Complex rho = 0.0;
            for (uint64_t b = 0; b < dim; ++b) {
                rho += at(a, b) * std::conj(at(c, b));
            }
            purity += std::norm(rho);
        }
    }
    return purity;
}

std::vector<Complex> DenseState::photon_factor() const {
    const size_t dim = photon_dim();
    size_t best = 0;
    double best_pop = -1.0;
    for (size_t a = 0; a < kNumSublevels; ++a) {
        double pop = 0.0;
        for (uint64_t b = 0; b < dim; ++b) {
            pop += std::norm(at(a, b));
        }
        if (pop > best_pop) {
            best_pop = pop;
            best = a;
        }
    }
    std::vector<Complex> out(dim);
    const double norm = std::sqrt(best_pop);
    for (uint64_t b = 0; b < dim; ++b) {
        out[b] = norm > 0.0 ? at(best, b) / norm : Complex(0.0);
    }
    return out;
}

void DenseState::apply_atom(const AtomOperator &op) {
    const size_t dim = photon_dim();
    std::array<Complex, kNumSublevels> col{};
    for (uint64_t b = 0; b < dim; ++b) {
        for (size_t a = 0; a < kNumSublevels; ++a) {
            col[a] = at(a, b);
        }
        for (size_t r = 0; r < kNumSublevels; ++r) {
            Complex s = 0.0;
            for (size_t a = 0; a < kNumSublevels; ++a) {
                s += op[r][a] * col[a];
            }
            at(r, b) = s;
        }
    }
}

void DenseState::apply_photon(int k, const Mat2 &u) {
    if (k < 0 || k >= n_) {
        throw std::out_of_range("apply_photon: photon index out of range");
    }
    const uint64_t mask = uint64_t{1} << (n_ - 1 - k);
    const size_t dim = photon_dim();
    for (size_t a = 0; a < kNumSublevels; ++a) {
        for (uint64_t b = 0; b < dim; ++b) {
            if (b & mask) {
                continue;
            }
            const Complex x0 = at(a, b);
            const Complex x1 = at(a, b | mask);
            at(a, b) = u[0][0] * x0 + u[0][1] * x1;
            at(a, b | mask) = u[1][0] * x0 + u[1][1] * x1;
        }
    }
}

std::vector<PauliString> CanonicalTarget::generators() const {
    std::vector<PauliString> gens;
    const auto un = static_cast<size_t>(n);
    if (kind == Kind::kGhz) {
        gens.push_back({std::string(un, 'X')});
        for (size_t k = 1; k < un; ++k) {
            std::string s(un, 'I');
            s[k - 1] = 'Z';
            s[k] = 'Z';
            gens.push_back({s});
        }
        return gens;
    }
    for (size_t k = 0; k < un; ++k) {
        std::string s(un, 'I');
        s[k] = 'X';
        if (k > 0) {
            s[k - 1] = 'Z';
        }
        if (k + 1 < un) {
            s[k + 1] = 'Z';
        }
        gens.push_back({s});
    }
    return gens;
}

std::vector<Complex> CanonicalTarget::state() const {
    check_size(n);
    const uint64_t dim = uint64_t{1} << n;
    std::vector<Complex> psi(dim, Complex(0.0));
    if (kind == Kind::kGhz) {
        psi.front() = 1.0 / std::sqrt(2.0);
        psi.back() += 1.0 / std::sqrt(2.0);
        return psi;
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    for (uint64_t b = 0; b < dim; ++b) {
        // Product of CZ on neighbours applied to |+>^N.
        const int edges = std::popcount(b & (b >> 1));
        psi[b] = (edges % 2 == 0) ? amp : -amp;
    }
    return psi;
}

DenseState dense_run(const ProtocolConfig &cfg, const FieldSample &field) {
    check_size(cfg.n_photons);
    const PulseSchedule sched = build_schedule(cfg);
    const double delta = field.delta;
    DenseState st = DenseState::from_atom(AtomKet::basis(level::k20));
    for (const auto &step : sched.steps) {
        switch (step.kind) {
            case Step::Kind::kPump:
                st = DenseState::from_atom(AtomKet::basis(level::k20));
                break;
            case Step::Kind::kWait:
                st.apply_atom(diagonal_precession(step.duration, delta, step.lab_frame, sched.zeeman));
                break;
            case Step::Kind::kRaman: {
                const AtomOperator half = diagonal_precession(step.duration / 2, delta, false, sched.zeeman);
                st.apply_atom(half);
                st.apply_atom(rotation(step.a, step.b, step.theta, step.phase));
                st.apply_atom(half);
                break;
            }
            case Step::Kind::kEmit:
                st = emit(st, step.emission);
                break;
            case Step::Kind::kMeasure:
            case Step::Kind::kClosingScatter:
                break;
        }
    }
    return st;
}

double fidelity(const DenseState &state, std::span<const Complex> target) {
    if (target.size() != state.photon_dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    double f = 0.0;
    for (size_t a = 0; a < kNumSublevels; ++a) {
        Complex ov = 0.0;
        for (uint64_t b = 0; b < target.size(); ++b) {
            ov += std::conj(target[b]) * state.at(a, b);
        }
        f += std::norm(ov);
    }
    return f;
}

double fidelity(const DenseState &state, const CanonicalTarget &target) {
    if (target.n != state.n_photons()) {
        throw std::invalid_argument("fidelity: photon number mismatch");
    }
    const auto psi = target.state();
    return fidelity(state, psi);
}

std::vector<double> outcome_distribution(const DenseState &state, std::span<const MeasBasis> bases,
                                         std::span<const double> frame) {
    const int n = state.n_photons();
    if (static_cast<int>(bases.size()) != n || (!frame.empty() && static_cast<int>(frame.size()) != n)) {
        throw std::invalid_argument("outcome_distribution: need one basis per photon");
    }
    DenseState st = state;
    const double h = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < n; ++k) {
        const auto &basis = bases[static_cast<size_t>(k)];
        if (basis.is_z()) {
            continue;
        }
        const double theta = basis.phi() - (frame.empty() ? 0.0 : frame[static_cast<size_t>(k)]);
        const Complex e = std::polar(1.0, -theta);
        // Rows are <v_+| and <v_-| with v_pm = (|R> +- e^{i theta}|L>)/sqrt2.
        st.apply_photon(k, {{{h, h * e}, {h, -h * e}}});
    }
    std::vector<double> probs(state.photon_dim(), 0.0);
    for (size_t a = 0; a < kNumSublevels; ++a) {
        for (uint64_t b = 0; b < probs.size(); ++b) {
            probs[b] += std::norm(st.at(a, b));
        }
    }
    return probs;
}

double pauli_expectation(const DenseState &state, const PauliString &pauli) {
    if (static_cast<int>(pauli.ops.size()) != state.n_photons()) {
        throw std::invalid_argument("pauli_expectation: length mismatch");
    }
    DenseState st = state;
    for (int k = 0; k < state.n_photons(); ++k) {
        const char op = pauli.ops[static_cast<size_t>(k)];
        if (op != 'I') {
            st.apply_photon(k, pauli_matrix(op));
        }
    }
    Complex e = 0.0;
    for (size_t i = 0; i < st.amplitudes().size(); ++i) {
        e += std::conj(state.amplitudes()[i]) * st.amplitudes()[i];
    }
    return e.real();
}

DenseState apply_corrections(const DenseState &state, std::span<const LocalCorrection> corrections) {
    if (static_cast<int>(corrections.size()) != state.n_photons()) {
        throw std::invalid_argument("apply_corrections: need one correction per photon");
    }
    DenseState st = state;
    for (int k = 0; k < state.n_photons(); ++k) {
        st.apply_photon(k, correction_matrix(corrections[static_cast<size_t>(k)]));
    }
    return st;
}

DenseState apply_frame(const DenseState &state, std::span<const double> frame) {
    std::vector<LocalCorrection> c;
    for (double phase : frame) {
        c.push_back({false, phase});
    }
    return apply_corrections(state, c);
}

FrameFit local_frame_fit(const DenseState &state, const CanonicalTarget &target, double max_residual) {
    const int n = state.n_photons();
    if (target.n != n) {
        throw std::invalid_argument("local_frame_fit: photon number mismatch");
    }
    const auto gens = target.generators();
    std::vector<LocalCorrection> options;
    for (int h = 0; h < 2; ++h) {
        for (int j = 0; j < kFramePhases; ++j) {
            options.push_back({h == 1, 2.0 * kPi * j / kFramePhases});
        }
    }
    FrameFit fit;
    fit.corrections.assign(static_cast<size_t>(n), LocalCorrection{});
    DenseState current = state;
    double score = generator_sum(current, gens);
    for (int sweep = 0; sweep < 4 * n + 4; ++sweep) {
        bool improved = false;
        for (int k = 0; k < n; ++k) {
            DenseState without = current;
            without.apply_photon(k, inverse_correction_matrix(fit.corrections[static_cast<size_t>(k)]));
            for (const auto &opt : options) {
                DenseState trial = without;
                trial.apply_photon(k, correction_matrix(opt));
                const double s = generator_sum(trial, gens);
                if (s > score + 1e-12) {
                    score = s;
                    current = std::move(trial);
                    fit.corrections[static_cast<size_t>(k)] = opt;
                    improved = true;
                }
            }
        }
        if (!improved) {
            break;
        }
    }
    fit.residual = std::max(0.0, 1.0 - fidelity(current, target));
    if (fit.residual > max_residual) {
        throw FrameMismatchError("local_frame_fit: residual infidelity " + std::to_string(fit.residual) +
                                 " exceeds the allowed " + std::to_string(max_residual));
    }
    return fit;
}

namespace {

using AtomMatrix = AtomOperator;

AtomMatrix multiply(const AtomMatrix &a, const AtomMatrix &b) {
    AtomMatrix c{};
    for (size_t i = 0; i < kNumSublevels; ++i) {
        for (size_t k = 0; k < kNumSublevels; ++k) {
            if (a[i][k] == Complex(0.0)) {
                continue;
            }
            for (size_t j = 0; j < kNumSublevels; ++j) {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return c;
}

AtomMatrix dagger(const AtomMatrix &a) {
    AtomMatrix c{};
    for (size_t i = 0; i < kNumSublevels; ++i) {
        for (size_t j = 0; j < kNumSublevels; ++j) {
            c[i][j] = std::conj(a[j][i]);
        }
    }
    return c;
}

AtomMatrix conjugate_by(const AtomMatrix &u, const AtomMatrix &rho) { return multiply(multiply(u, rho), dagger(u)); }

/// Atom-to-atom blocks of an emission, one per polarization.
std::array<AtomMatrix, 2> emission_blocks(EmissionKind kind) {
    std::array<AtomMatrix, 2> m{};
    for (size_t a = 0; a < kNumSublevels; ++a) {
        for (const auto &t : emission_terms(kind, Sublevel::from_index(a))) {
            m[t.pol][t.to.index()][a] += t.coeff;
        }
    }
    return m;
}

}  // namespace

double product_expectation(const ProtocolConfig &cfg, std::span<const MeasBasis> bases,
                           std::span<const std::array<double, 2>> weights, const FieldSample &field) {
    const PulseSchedule sched = build_schedule(cfg);
    const auto n = static_cast<size_t>(sched.n_photons);
    if (bases.size() != n || weights.size() != n) {
        throw std::invalid_argument("product_expectation: need one basis and weight pair per photon");
    }
    AtomMatrix rho{};
    const size_t i20 = level::k20.index();
    rho[i20][i20] = 1.0;
    std::array<AtomMatrix, 2> pending{};  // blocks V_p rho V_q^dagger, p = q summed later
    std::array<std::array<AtomMatrix, 2>, 2> joint{};
    for (const auto &step : sched.steps) {
        switch (step.kind) {
            case Step::Kind::kPump:
                rho = AtomMatrix{};
                rho[i20][i20] = 1.0;
                break;
            case Step::Kind::kWait:
                rho = conjugate_by(diagonal_precession(step.duration, field.delta, step.lab_frame, sched.zeeman), rho);
                break;
            case Step::Kind::kRaman: {
                const AtomMatrix half = diagonal_precession(step.duration / 2, field.delta, false, sched.zeeman);
                const AtomMatrix u = multiply(half, multiply(rotation(step.a, step.b, step.theta, step.phase), half));
                rho = conjugate_by(u, rho);
                break;
            }
            case Step::Kind::kEmit: {
                pending = emission_blocks(step.emission);
                double emitted = 0.0;
                double total = 0.0;
                for (size_t p = 0; p < 2; ++p) {
                    for (size_t q = 0; q < 2; ++q) {
                        joint[p][q] = multiply(multiply(pending[p], rho), dagger(pending[q]));
                    }
                    for (size_t i = 0; i < kNumSublevels; ++i) {
                        emitted += std::abs(joint[p][p][i][i]);
                    }
                }
                for (size_t i = 0; i < kNumSublevels; ++i) {
                    total += std::abs(rho[i][i]);
                }
                if (total - emitted > 1e-9 * std::max(1.0, total)) {
                    throw EmissionLevelError("product_expectation: population outside the emitting levels");
                }
                break;
            }
            case Step::Kind::kMeasure: {
                const auto slot = static_cast<size_t>(step.slot);
                const auto &basis = bases[slot];
                AtomMatrix next{};
                for (int o : {+1, -1}) {
                    const double w = weights[slot][o > 0 ? 0 : 1];
                    if (w == 0.0) {
                        continue;
                    }
                    std::array<Complex, 2> v{};
                    if (basis.is_z()) {
                        v = o > 0 ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
                    } else {
                        const double h = 1.0 / std::sqrt(2.0);
                        v = {h, (o > 0 ? h : -h) * std::polar(1.0, basis.phi() - sched.frame[slot])};
                    }
                    for (size_t p = 0; p < 2; ++p) {
                        for (size_t q = 0; q < 2; ++q) {
                            const Complex c = w * std::conj(v[p]) * v[q];
                            if (c == Complex(0.0)) {
                                continue;
                            }
                            for (size_t i = 0; i < kNumSublevels; ++i) {
                                for (size_t j = 0; j < kNumSublevels; ++j) {
                                    next[i][j] += c * joint[p][q][i][j];
                                }
                            }
                        }
                    }
                }
                rho = next;
                break;
            }
            case Step::Kind::kClosingScatter:
                break;
        }
    }
    Complex tr = 0.0;
    for (size_t i = 0; i < kNumSublevels; ++i) {
        tr += rho[i][i];
    }
    return tr.real();
}

double parity_expectation(const ProtocolConfig &cfg, std::span<const MeasBasis> bases, const FieldSample &field) {
    const std::vector<std::array<double, 2>> w(bases.size(), {1.0, -1.0});
    return product_expectation(cfg, bases, w, field);
}

std::vector<ShotRecord> sample_records(const DenseState &state, std::span<const MeasBasis> setting, uint64_t shots,
                                       Rng &rng) {
    const auto probs = outcome_distribution(state, setting);
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    const int n = state.n_photons();
    std::vector<ShotRecord> out;
    out.reserve(shots);
    for (uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        const auto idx = static_cast<uint64_t>(
            std::min<ptrdiff_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
                                static_cast<ptrdiff_t>(cdf.size()) - 1));
        ShotRecord r;
        r.run_id = s;
        for (int k = 0; k < n; ++k) {
            const bool minus = (idx >> (n - 1 - k)) & 1U;
            r.photons.push_back({true, setting[static_cast<size_t>(k)], minus ? -1 : +1});
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace photonchain
