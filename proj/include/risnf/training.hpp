// SPDX-License-Identifier: Apache-2.0
//
// risnf: near-field RIS channel modelling and estimation library
// Copyright (C) 2026 The risnf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISNF_TRAINING_HPP
#define RISNF_TRAINING_HPP

#include <cstddef>

#include "risnf/types.hpp"

namespace risnf
{
    struct TrainingDesign
    {
        std::size_t pilot_length = 1; // T_p
        double pilot_power = 1.0;     // p_t
        double noise_variance = 1.0;  // sigma^2

        double snr() const { return pilot_power / noise_variance; }

        // p_t set from the SNR in dB for the given noise variance
        static TrainingDesign from_snr_db(std::size_t pilot_length, double snr_db, double noise_variance = 1.0);
    };

    void validate(const TrainingDesign &design, std::size_t ris_elements, std::size_t ue_antennas);

    // (T_p / N) x K, unit-modulus. Row t holds the RIS phases of interval t.
    struct PhaseSchedule
    {
        CMatrix phi;

        Eigen::Index intervals() const { return phi.rows(); }
        Eigen::Index ris_elements() const { return phi.cols(); }
    };

    // Throws InvalidArgument unless every entry has unit modulus
    PhaseSchedule make_phase_schedule(CMatrix phi);

    // Row t = row (t mod K) of the K-point DFT matrix; needs T_p / N to be an
    // integer multiple of K
    PhaseSchedule dft_phase_schedule(std::size_t ris_elements, std::size_t pilot_length, std::size_t ue_antennas);

    // N x N unitary DFT. Within an interval the UE sends column n scaled by
    // sqrt(N), i.e. unit power per antenna.
    struct PilotMatrix
    {
        CMatrix x;

        Eigen::Index size() const { return x.rows(); }
    };

    PilotMatrix orthonormal_pilots(std::size_t ue_antennas);

    // Q^H Q = (N Phi^H Phi) kron I_{NM}; only the K x K block is stored
    struct FactoredGram
    {
        CMatrix ris;
        Eigen::Index identity_dim = 0;

        // Returns c when ris == c I to 1e-12 relative, otherwise 0
        double scaled_identity() const;
    };

    FactoredGram gram(const PhaseSchedule &phi, std::size_t ue_antennas, std::size_t bs_antennas);

    // Received vectors as the columns of an M x T_p matrix, step
    // l = t * N + n (0-based) uses RIS row t and pilot column n
    struct ObservationBatch
    {
        CMatrix y;

        Eigen::Index steps() const { return y.cols(); }
    };

    // Q^H y (without the sqrt(p_t) factor), length K N M
    CVector apply_adjoint(const PhaseSchedule &phi, const PilotMatrix &x, const ObservationBatch &obs);

    // Explicit training matrix Q (T_p M x K N M), limited to K N M <= 512
    CMatrix assemble_training_matrix(const PhaseSchedule &phi, const PilotMatrix &x, std::size_t bs_antennas);
}

#endif
