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

#ifndef PHOTONCHAIN_ORACLE_H
#define PHOTONCHAIN_ORACLE_H

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "photonchain/levels.h"
#include "photonchain/noise.h"
#include "photonchain/records.h"
#include "photonchain/rng.h"
#include "photonchain/schedule.h"

namespace photonchain {

inline constexpr int kOracleMaxPhotons = 12;

class OracleSizeError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class FrameMismatchError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Dense amplitude vector of atom (x) N photon qubits. Index is
/// atom * 2^N + photon bits, photon 0 in the most significant bit, bit value
/// 1 meaning L.
class DenseState {
   public:
    DenseState() : DenseState(0) {}
    /// Zero vector for N photons.
    explicit DenseState(int n_photons);

    static DenseState from_atom(const AtomKet &atom);
    /// Pure photon state with the atom parked in `atom`.
    static DenseState from_photons(std::span<const Complex> photons, Sublevel atom = level::k10);
    /// Purification of sum_i |photons_i><photons_i| (unnormalized components,
    /// at most 8) using the atom as the ancilla.
    static DenseState from_mixture(std::span<const std::vector<Complex>> components);

    int n_photons() const { return n_; }
    size_t photon_dim() const { return size_t{1} << n_; }
    const std::vector<Complex> &amplitudes() const { return amp_; }
    std::vector<Complex> &amplitudes() { return amp_; }
    Complex &at(size_t atom, uint64_t bits) { return amp_[atom * photon_dim() + bits]; }
    const Complex &at(size_t atom, uint64_t bits) const { return amp_[atom * photon_dim() + bits]; }

    double norm_squared() const;
    /// Tr(rho_atom^2).
    double atom_purity() const;
    /// Photon amplitudes of the sublevel carrying the most population.
    std::vector<Complex> photon_factor() const;

    /// Applies an 8x8 operator to the atom.
    void apply_atom(const AtomOperator &op);
    /// Applies a 2x2 operator (rows, cols in R, L order) to photon k.
    void apply_photon(int k, const std::array<std::array<Complex, 2>, 2> &u);

   private:
    int n_;
    std::vector<Complex> amp_;
};

/// Pauli string over the photons, one of I X Y Z per photon.
struct PauliString {
    std::string ops;
};

struct CanonicalTarget {
    enum class Kind { kGhz, kCluster };
    Kind kind = Kind::kGhz;
    int n = 0;

    static CanonicalTarget ghz(int n) { return {Kind::kGhz, n}; }
    static CanonicalTarget cluster(int n) { return {Kind::kCluster, n}; }

    /// X^N and Z_{k-1} Z_k for GHZ; Z_{k-1} X_k Z_{k+1} for the linear cluster.
    std::vector<PauliString> generators() const;
    /// Photon amplitudes, R = 0, photon 0 most significant.
    std::vector<Complex> state() const;
};

/// Runs the noiseless (or fixed-field) schedule as one unitary, keeping all
/// photons. Raman pulses and waits act on the atom only.
DenseState dense_run(const ProtocolConfig &cfg, const FieldSample &field = {});

/// sum over atom sublevels of |<target|psi_atom>|^2.
double fidelity(const DenseState &state, const CanonicalTarget &target);
double fidelity(const DenseState &state, std::span<const Complex> target);

/// Born probabilities indexed by outcome bits (photon 0 most significant,
/// bit 1 meaning outcome -1). `frame` holds optional per-photon Z-phases
/// removed before measurement.
std::vector<double> outcome_distribution(const DenseState &state, std::span<const MeasBasis> bases,
                                         std::span<const double> frame = {});

double pauli_expectation(const DenseState &state, const PauliString &pauli);

/// Single-photon correction Rz(phase) * H^hadamard, Rz = diag(1, e^{i phase}).
struct LocalCorrection {
    bool hadamard = false;
    double phase = 0.0;
};

struct FrameFit {
    std::vector<LocalCorrection> corrections;
    double residual = 1.0;  // 1 - fidelity after correction
};

DenseState apply_corrections(const DenseState &state, std::span<const LocalCorrection> corrections);
/// Z-phase frame as corrections.
DenseState apply_frame(const DenseState &state, std::span<const double> frame);

/// Coordinate search over per-photon corrections (64 phases, with or
/// without H) maximizing the summed generator expectations. Throws
/// FrameMismatchError when the residual exceeds max_residual.
FrameFit local_frame_fit(const DenseState &state, const CanonicalTarget &target,
                         double max_residual = std::numeric_limits<double>::infinity());

/// Exact expectation of prod_k w_k(o_k) over the photon outcomes of a
/// protocol run, with weights[k] = {w(+1), w(-1)}. Propagates the atom
/// density matrix through the schedule, so there is no photon-number cap.
/// Frame phases of the config are applied as in the engine.
double product_expectation(const ProtocolConfig &cfg, std::span<const MeasBasis> bases,
                           std::span<const std::array<double, 2>> weights, const FieldSample &field = {});
/// E[prod_k o_k].
double parity_expectation(const ProtocolConfig &cfg, std::span<const MeasBasis> bases,
                          const FieldSample &field = {});

/// Draws fully detected shot records from the exact outcome distribution.
std::vector<ShotRecord> sample_records(const DenseState &state, std::span<const MeasBasis> setting, uint64_t shots,
                                       Rng &rng);

}  // namespace photonchain

#endif  // PHOTONCHAIN_ORACLE_H
