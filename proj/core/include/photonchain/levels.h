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

// Linear-algebra primitives for the emitter: the eight ground-state Zeeman
// sublevels of the atom, the photon polarization qubit, Raman rotations,
// the three emission isometries, Larmor precession and single-photon
// projective measurement.

#ifndef PHOTONCHAIN_LEVELS_H
#define PHOTONCHAIN_LEVELS_H

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "photonchain/rng.h"

namespace photonchain {

using Complex = std::complex<double>;

inline constexpr size_t kNumSublevels = 8;
inline constexpr size_t kJointDim = 2 * kNumSublevels;

/// Nominal Larmor angular frequency of the bias field, 2 pi x 100 kHz.
inline constexpr double kLarmorAngular = 2.0 * std::numbers::pi * 100e3;

class InvalidPulseError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an emission is attempted with population outside the levels
/// the emission couples. In a noiseless schedule this is a sequencing bug.
class EmissionLevelError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class NumericalIntegrityError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Hyperfine ground state |F, mF> with F in {1, 2} and |mF| <= F.
///
/// Stored as a dense index: F=1 occupies 0..2 (mF = -1, 0, 1) and F=2
/// occupies 3..7 (mF = -2 .. 2).
class Sublevel {
   public:
    constexpr Sublevel(int f, int mf) : index_(encode(f, mf)) {}

    static constexpr Sublevel from_index(size_t index) {
        if (index >= kNumSublevels) {
            throw std::invalid_argument("sublevel index out of range");
        }
        return index < 3 ? Sublevel(1, static_cast<int>(index) - 1) : Sublevel(2, static_cast<int>(index) - 5);
    }

    constexpr int f() const { return index_ < 3 ? 1 : 2; }
    constexpr int mf() const { return index_ < 3 ? static_cast<int>(index_) - 1 : static_cast<int>(index_) - 5; }
    constexpr size_t index() const { return index_; }

    std::string str() const;

    friend constexpr bool operator==(Sublevel, Sublevel) = default;

   private:
    static constexpr size_t encode(int f, int mf) {
        if (f == 1 && mf >= -1 && mf <= 1) {
            return static_cast<size_t>(mf + 1);
        }
        if (f == 2 && mf >= -2 && mf <= 2) {
            return static_cast<size_t>(mf + 5);
        }
        throw std::invalid_argument("invalid sublevel: need F in {1,2} and |mF| <= F");
    }

    size_t index_;
};

namespace level {
inline constexpr Sublevel k1m1{1, -1};
inline constexpr Sublevel k10{1, 0};
inline constexpr Sublevel k1p1{1, 1};
inline constexpr Sublevel k2m2{2, -2};
inline constexpr Sublevel k2m1{2, -1};
inline constexpr Sublevel k20{2, 0};
inline constexpr Sublevel k2p1{2, 1};
inline constexpr Sublevel k2p2{2, 2};
}  // namespace level

/// Photon polarization. R is logical 0 (Z = +1), L is logical 1 (Z = -1).
enum class Polarization : size_t { R = 0, L = 1 };

struct AtomKet {
    std::array<Complex, kNumSublevels> amp{};

    static AtomKet basis(Sublevel s) {
        AtomKet k;
        k.amp[s.index()] = 1.0;
        return k;
    }

    Complex &operator[](Sublevel s) { return amp[s.index()]; }
    const Complex &operator[](Sublevel s) const { return amp[s.index()]; }

    double norm_squared() const;
    double population(Sublevel s) const { return std::norm(amp[s.index()]); }
    void normalize();
};

struct PhotonState {
    std::array<Complex, 2> amp{};  // (R, L)
};

/// Atom (x) photon state right after an emission. Index = 2 * sublevel + pol.
struct JointKet {
    std::array<Complex, kJointDim> amp{};

    Complex &at(Sublevel s, Polarization p) { return amp[2 * s.index() + static_cast<size_t>(p)]; }
    const Complex &at(Sublevel s, Polarization p) const { return amp[2 * s.index() + static_cast<size_t>(p)]; }

    double norm_squared() const;
};

/// Single-photon measurement basis: Z, or a basis on the equator of the
/// polarization Bloch sphere projecting onto (|R> +- e^{i phi} |L>)/sqrt2.
/// X is the equator basis with phi = 0.
class MeasBasis {
   public:
    enum class Kind { Z, Equator };

    static MeasBasis z() { return MeasBasis(Kind::Z, 0.0); }
    static MeasBasis x() { return MeasBasis(Kind::Equator, 0.0); }
    /// Requires phi in [0, pi].
    static MeasBasis equator(double phi);

    Kind kind() const { return kind_; }
    double phi() const { return phi_; }
    bool is_z() const { return kind_ == Kind::Z; }
    bool is_x() const { return kind_ == Kind::Equator && phi_ == 0.0; }

    /// Eigenvector (R, L amplitudes) for outcome +1 or -1. `frame_phase`
    /// rotates the equator reference: measuring a photon whose local frame
    /// differs by a Z-phase alpha is the same as measuring the raw photon at
    /// phi - alpha.
    std::array<Complex, 2> eigenvector(int outcome, double frame_phase = 0.0) const;

    /// Text code used in record files: "Z", "X" or "E:<phi>".
    std::string code() const;
    static MeasBasis parse(std::string_view code);

    friend bool operator==(const MeasBasis &, const MeasBasis &) = default;

   private:
    MeasBasis(Kind k, double phi) : kind_(k), phi_(phi) {}

    Kind kind_;
    double phi_;
};

/// Zeeman precession model. Sublevel |F, mF> accumulates phase
/// exp(-i g_F mF omega_L (1 + delta) t); g_1 = +1 and g_2 = -1 by default.
struct ZeemanModel {
    double larmor_angular = kLarmorAngular;
    double g_f1 = 1.0;
    double g_f2 = -1.0;

    double phase_rate(Sublevel s) const {
        return (s.f() == 1 ? g_f1 : g_f2) * s.mf() * larmor_angular;
    }
};

using AtomOperator = std::array<std::array<Complex, kNumSublevels>, kNumSublevels>;

/// 8x8 matrix of exp(-i theta/2 (cos(phase) sx + sin(phase) sy)) acting on
/// span{a, b} (a is the first basis vector), identity elsewhere.
AtomOperator raman_matrix(Sublevel a, Sublevel b, double theta, double phase);

/// Diagonal of the precession propagator for one interval.
std::array<Complex, kNumSublevels> precession_phases(double duration, double delta, const ZeemanModel &model);

AtomKet apply(const AtomOperator &op, const AtomKet &state);

AtomKet raman_rotation(const AtomKet &state, Sublevel a, Sublevel b, double theta, double phase);

AtomKet larmor_precess(const AtomKet &state, double duration, double delta, const ZeemanModel &model = {});
JointKet larmor_precess(const JointKet &state, double duration, double delta, const ZeemanModel &model = {});

/// Precession in the frame co-rotating at the nominal Larmor frequency: only
/// the fractional offset \p delta produces phase, exp(-i g_F mF omega_L delta t).
AtomKet larmor_precess_offset(const AtomKet &state, double duration, double delta, const ZeemanModel &model = {});

enum class EmissionKind { kInitial, kCycling, kClosing };

/// One of the three emission processes as a 16x8 isometry V (atom ->
/// atom (x) photon). Only the "active" levels carry population in a valid
/// schedule; the remaining columns are an orthonormal completion so that
/// V^dagger V = 1 holds on the full space.
class EmissionMap {
   public:
    static const EmissionMap &get(EmissionKind kind);

    EmissionKind kind() const { return kind_; }
    std::span<const Sublevel> active_levels() const { return active_; }
    const Complex &element(size_t row, size_t col) const { return v_[row][col]; }

    double active_population(const AtomKet &state) const;

    /// Applies V. Throws EmissionLevelError if more than `tolerance` of the
    /// population lies outside the active levels.
    JointKet apply(const AtomKet &state, double tolerance = 1e-9) const;

    /// Applies V without a population check.
    JointKet apply_unchecked(const AtomKet &state) const;

    /// Zeroes every amplitude outside the active levels (no renormalization).
    AtomKet project_active(const AtomKet &state) const;
    AtomKet project_inactive(const AtomKet &state) const;

   private:
    EmissionMap(EmissionKind kind, std::vector<Sublevel> active, std::vector<std::array<Complex, kJointDim>> images);

    EmissionKind kind_;
    std::vector<Sublevel> active_;
    std::array<std::array<Complex, kNumSublevels>, kJointDim> v_{};
};

/// |2,0> -> (|1,1>|R> - |1,-1>|L>)/sqrt2.
JointKet emit_initial(const AtomKet &state);
/// Emission sub-step of a cycle: |2,+2> -> |1,+1>|R>, |2,-2> -> |1,-1>|L>.
JointKet emit_cycling(const AtomKet &state);
/// Closing emission: |2,-1> -> |1,0>|R>, |2,+1> -> -|1,0>|L>.
JointKet emit_closing(const AtomKet &state);

/// Hyperfine transfer |1,+-1> -> |2,+-2> (two sequential pi pulses).
AtomKet cycling_transfer(const AtomKet &state);
/// Closing transfer |1,+-1> -> |2,-+1> (two sequential pi pulses).
AtomKet closing_transfer(const AtomKet &state);

/// Composite qubit rotation on {|1,1>, |1,-1>} via |2,0>: pi, theta, pi.
AtomKet composite_rotation(const AtomKet &state, double theta);

struct PhotonMeasurement {
    int outcome;        // +1 or -1
    AtomKet atom;       // renormalized post-measurement atomic state
    double probability; // Born probability of the sampled outcome
};

/// Unnormalized atomic state conditioned on the photon outcome.
AtomKet project_photon(const JointKet &joint, const MeasBasis &basis, int outcome, double frame_phase = 0.0);

double outcome_probability(const JointKet &joint, const MeasBasis &basis, int outcome, double frame_phase = 0.0);

PhotonMeasurement measure_photon(const JointKet &joint, const MeasBasis &basis, Rng &rng, double frame_phase = 0.0);

}  // namespace photonchain

#endif  // PHOTONCHAIN_LEVELS_H
