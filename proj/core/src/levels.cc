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

#include "photonchain/levels.h"

#include <charconv>
#include <cmath>
#include <sstream>

namespace photonchain {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_normalized(const AtomKet &state, const char *what) {
    if (std::abs(state.norm_squared() - 1.0) > kNormTolerance) {
        throw std::invalid_argument(std::string(what) + ": input state is not normalized");
    }
}

using Image = std::array<Complex, kJointDim>;

Image joint_basis(Sublevel s, Polarization p) {
    Image v{};
    v[2 * s.index() + static_cast<size_t>(p)] = 1.0;
    return v;
}

Complex inner(const Image &a, const Image &b) {
    Complex acc = 0.0;
    for (size_t i = 0; i < kJointDim; ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

}  // namespace

std::string Sublevel::str() const {
    std::ostringstream os;
    os << '|' << f() << ',' << mf() << '>';
    return os.str();
}

double AtomKet::norm_squared() const {
    double n = 0.0;
    for (const auto &a : amp) {
        n += std::norm(a);
    }
    return n;
}

void AtomKet::normalize() {
    const double n = std::sqrt(norm_squared());
    if (n == 0.0) {
        throw NumericalIntegrityError("cannot normalize a zero atomic state");
    }
    for (auto &a : amp) {
        a /= n;
    }
}

double JointKet::norm_squared() const {
    double n = 0.0;
    for (const auto &a : amp) {
        n += std::norm(a);
    }
    return n;
}

MeasBasis MeasBasis::equator(double phi) {
    if (!(phi >= 0.0 && phi <= std::numbers::pi)) {
        throw std::invalid_argument("equator basis angle must lie in [0, pi]");
    }
    return MeasBasis(Kind::Equator, phi);
}

std::array<Complex, 2> MeasBasis::eigenvector(int outcome, double frame_phase) const {
    const double h = 1.0 / std::sqrt(2.0);
    if (kind_ == Kind::Z) {
        if (outcome > 0) {
            return {Complex(1.0), Complex(0.0)};
        }
        return {Complex(0.0), Complex(1.0)};
    }
    const Complex e = std::polar(1.0, phi_ - frame_phase);
    return {Complex(h), (outcome > 0 ? h : -h) * e};
}

std::string MeasBasis::code() const {
    if (kind_ == Kind::Z) {
        return "Z";
    }
    if (phi_ == 0.0) {
        return "X";
    }
    // Shortest round-trip representation keeps record files lossless.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), phi_);
    return "E:" + std::string(buf, res.ptr);
}

MeasBasis MeasBasis::parse(std::string_view code) {
    if (code == "Z") {
        return z();
    }
    if (code == "X") {
        return x();
    }
    if (code.size() > 2 && code.substr(0, 2) == "E:") {
        double phi = 0.0;
        const auto body = code.substr(2);
        auto res = std::from_chars(body.data(), body.data() + body.size(), phi);
        if (res.ec != std::errc() || res.ptr != body.data() + body.size()) {
            throw std::invalid_argument("malformed equator basis code: " + std::string(code));
        }
        return equator(phi);
    }
    throw std::invalid_argument("unknown basis code: " + std::string(code));
}

AtomOperator raman_matrix(Sublevel a, Sublevel b, double theta, double phase) {
    if (a == b) {
        throw InvalidPulseError("Raman rotation needs two distinct sublevels, got " + a.str() + " twice");
    }
    AtomOperator m{};
    for (size_t i = 0; i < kNumSublevels; ++i) {
        m[i][i] = 1.0;
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Complex minus_i(0.0, -1.0);
    const size_t ia = a.index();
    const size_t ib = b.index();
    m[ia][ia] = c;
    m[ib][ib] = c;
    // exp(-i theta/2 n.sigma) with n = (cos phase, sin phase, 0).
    m[ia][ib] = minus_i * s * std::polar(1.0, -phase);
    m[ib][ia] = minus_i * s * std::polar(1.0, phase);
    return m;
}

std::array<Complex, kNumSublevels> precession_phases(double duration, double delta, const ZeemanModel &model) {
    if (duration < 0.0) {
        throw std::invalid_argument("precession duration must be non-negative");
    }
    std::array<Complex, kNumSublevels> d{};
    for (size_t i = 0; i < kNumSublevels; ++i) {
        const double rate = model.phase_rate(Sublevel::from_index(i)) * (1.0 + delta);
        d[i] = std::polar(1.0, -rate * duration);
    }
    return d;
}

AtomKet apply(const AtomOperator &op, const AtomKet &state) {
    AtomKet out;
    for (size_t i = 0; i < kNumSublevels; ++i) {
        Complex acc = 0.0;
        for (size_t j = 0; j < kNumSublevels; ++j) {
            acc += op[i][j] * state.amp[j];
        }
        out.amp[i] = acc;
    }
    return out;
}

AtomKet raman_rotation(const AtomKet &state, Sublevel a, Sublevel b, double theta, double phase) {
    if (a == b) {
        throw InvalidPulseError("Raman rotation needs two distinct sublevels, got " + a.str() + " twice");
    }
    require_normalized(state, "raman_rotation");
    // Only two amplitudes change; avoid the full 8x8 product.
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Complex minus_i(0.0, -1.0);
    AtomKet out = state;
    const Complex xa = state[a];
    const Complex xb = state[b];
    out[a] = c * xa + minus_i * s * std::polar(1.0, -phase) * xb;
    out[b] = minus_i * s * std::polar(1.0, phase) * xa + c * xb;
    return out;
}

AtomKet larmor_precess(const AtomKet &state, double duration, double delta, const ZeemanModel &model) {
    const auto d = precession_phases(duration, delta, model);
    AtomKet out = state;
    for (size_t i = 0; i < kNumSublevels; ++i) {
        out.amp[i] *= d[i];
    }
    return out;
}

JointKet larmor_precess(const JointKet &state, double duration, double delta, const ZeemanModel &model) {
    const auto d = precession_phases(duration, delta, model);
    JointKet out = state;
    for (size_t i = 0; i < kJointDim; ++i) {
        out.amp[i] *= d[i / 2];
    }
    return out;
}

AtomKet larmor_precess_offset(const AtomKet &state, double duration, double delta, const ZeemanModel &model) {
    if (duration < 0.0) {
        throw std::invalid_argument("precession duration must be non-negative");
    }
    AtomKet out = state;
    if (delta == 0.0 || duration == 0.0) {
        return out;
    }
    for (size_t i = 0; i < kNumSublevels; ++i) {
        if (out.amp[i] != 0.0) {
            out.amp[i] *= std::polar(1.0, -model.phase_rate(Sublevel::from_index(i)) * delta * duration);
        }
    }
    return out;
}

EmissionMap::EmissionMap(EmissionKind kind, std::vector<Sublevel> active, std::vector<Image> images)
    : kind_(kind), active_(std::move(active)) {
    std::array<bool, kNumSublevels> is_active{};
    std::vector<Image> basis;
    for (size_t k = 0; k < active_.size(); ++k) {
        is_active[active_[k].index()] = true;
        for (size_t r = 0; r < kJointDim; ++r) {
            v_[r][active_[k].index()] = images[k][r];
        }
        basis.push_back(images[k]);
    }
    // Orthonormal completion for the inactive columns. Candidates are tried
    // in a fixed order (own level with R, own level with L, then any joint
    // basis vector) so the completion is deterministic.
    for (size_t col = 0; col < kNumSublevels; ++col) {
        if (is_active[col]) {
            continue;
        }
        const Sublevel s = Sublevel::from_index(col);
        std::vector<Image> candidates = {joint_basis(s, Polarization::R), joint_basis(s, Polarization::L)};
        for (size_t r = 0; r < kJointDim; ++r) {
            Image e{};
            e[r] = 1.0;
            candidates.push_back(e);
        }
        for (auto cand : candidates) {
            for (const auto &b : basis) {
                const Complex p = inner(b, cand);
                for (size_t r = 0; r < kJointDim; ++r) {
                    cand[r] -= p * b[r];
                }
            }
            const double n = std::sqrt(std::real(inner(cand, cand)));
            if (n > 0.5) {
                for (auto &x : cand) {
                    x /= n;
                }
                basis.push_back(cand);
                for (size_t r = 0; r < kJointDim; ++r) {
                    v_[r][col] = cand[r];
                }
                break;
            }
        }
    }
}

const EmissionMap &EmissionMap::get(EmissionKind kind) {
    static const EmissionMap initial = [] {
        const double h = 1.0 / std::sqrt(2.0);
        Image img{};
        img[2 * level::k1p1.index() + 0] = h;
        img[2 * level::k1m1.index() + 1] = -h;
        return EmissionMap(EmissionKind::kInitial, {level::k20}, {img});
    }();
    static const EmissionMap cycling(EmissionKind::kCycling, {level::k2p2, level::k2m2},
                                     {joint_basis(level::k1p1, Polarization::R),
                                      joint_basis(level::k1m1, Polarization::L)});
    static const EmissionMap closing = [] {
        Image minus_l = joint_basis(level::k10, Polarization::L);
        for (auto &x : minus_l) {
            x = -x;
        }
        return EmissionMap(EmissionKind::kClosing, {level::k2m1, level::k2p1},
                           {joint_basis(level::k10, Polarization::R), minus_l});
    }();
    switch (kind) {
        case EmissionKind::kInitial:
            return initial;
        case EmissionKind::kCycling:
            return cycling;
        case EmissionKind::kClosing:
            return closing;
    }
    throw std::logic_error("unknown emission kind");
}

double EmissionMap::active_population(const AtomKet &state) const {
    double p = 0.0;
    for (const auto s : active_) {
        p += state.population(s);
    }
    return p;
}

JointKet EmissionMap::apply_unchecked(const AtomKet &state) const {
    JointKet out;
    for (size_t r = 0; r < kJointDim; ++r) {
        Complex acc = 0.0;
        for (size_t c = 0; c < kNumSublevels; ++c) {
            acc += v_[r][c] * state.amp[c];
        }
        out.amp[r] = acc;
    }
    return out;
}

JointKet EmissionMap::apply(const AtomKet &state, double tolerance) const {
    const double outside = state.norm_squared() - active_population(state);
    if (outside > tolerance) {
        std::ostringstream os;
        os << "emission from wrong level: population " << outside << " outside the emitting levels";
        throw EmissionLevelError(os.str());
    }
    return apply_unchecked(state);
}

AtomKet EmissionMap::project_active(const AtomKet &state) const {
    AtomKet out;
    for (const auto s : active_) {
        out[s] = state[s];
    }
    return out;
}

AtomKet EmissionMap::project_inactive(const AtomKet &state) const {
    AtomKet out = state;
    for (const auto s : active_) {
        out[s] = 0.0;
    }
    return out;
}

JointKet emit_initial(const AtomKet &state) { return EmissionMap::get(EmissionKind::kInitial).apply(state); }
JointKet emit_cycling(const AtomKet &state) { return EmissionMap::get(EmissionKind::kCycling).apply(state); }
JointKet emit_closing(const AtomKet &state) { return EmissionMap::get(EmissionKind::kClosing).apply(state); }

AtomKet cycling_transfer(const AtomKet &state) {
    const double pi = std::numbers::pi;
    return raman_rotation(raman_rotation(state, level::k1p1, level::k2p2, pi, 0.0), level::k1m1, level::k2m2, pi, 0.0);
}

AtomKet closing_transfer(const AtomKet &state) {
    const double pi = std::numbers::pi;
    return raman_rotation(raman_rotation(state, level::k1p1, level::k2m1, pi, 0.0), level::k1m1, level::k2p1, pi, 0.0);
}

AtomKet composite_rotation(const AtomKet &state, double theta) {
    const double pi = std::numbers::pi;
    AtomKet s = raman_rotation(state, level::k1p1, level::k20, pi, 0.0);
    s = raman_rotation(s, level::k1m1, level::k20, theta, 0.0);
    return raman_rotation(s, level::k1p1, level::k20, pi, 0.0);
}

AtomKet project_photon(const JointKet &joint, const MeasBasis &basis, int outcome, double frame_phase) {
    const auto e = basis.eigenvector(outcome, frame_phase);
    const Complex er = std::conj(e[0]);
    const Complex el = std::conj(e[1]);
    AtomKet out;
    for (size_t i = 0; i < kNumSublevels; ++i) {
        out.amp[i] = er * joint.amp[2 * i] + el * joint.amp[2 * i + 1];
    }
    return out;
}

double outcome_probability(const JointKet &joint, const MeasBasis &basis, int outcome, double frame_phase) {
    return project_photon(joint, basis, outcome, frame_phase).norm_squared() / joint.norm_squared();
}

PhotonMeasurement measure_photon(const JointKet &joint, const MeasBasis &basis, Rng &rng, double frame_phase) {
    const double total = joint.norm_squared();
    AtomKet plus = project_photon(joint, basis, +1, frame_phase);
    const double p_plus = plus.norm_squared() / total;
    const bool take_plus = rng.uniform() < p_plus;
    AtomKet chosen = take_plus ? plus : project_photon(joint, basis, -1, frame_phase);
    const double p = take_plus ? p_plus : 1.0 - p_plus;
    if (chosen.norm_squared() <= 0.0) {
        throw NumericalIntegrityError("measure_photon selected a zero-norm branch");
    }
    chosen.normalize();
    return {take_plus ? +1 : -1, chosen, p};
}

}  // namespace photonchain
