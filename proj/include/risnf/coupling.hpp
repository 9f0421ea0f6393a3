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

#ifndef RISNF_COUPLING_HPP
#define RISNF_COUPLING_HPP

#include <functional>

#include "risnf/correlation.hpp"
#include "risnf/geometry.hpp"
#include "risnf/types.hpp"

namespace risnf
{
    inline constexpr double half_wave_radiation_resistance = 73.08; // Ohms

    // z-oriented thin dipoles. Only half-wave length is supported.
    struct DipoleConfig
    {
        double length_in_wavelengths = 0.5;
        double dissipation_resistance = half_wave_radiation_resistance;
        // Lateral offset used for co-linear pairs whose wires overlap; the
        // zero-radius integral diverges there
        double wire_radius_in_wavelengths = 1e-3;
    };

    void validate(const DipoleConfig &cfg);

    enum class DipoleArrangement
    {
        SideBySide,
        Collinear,
        Echelon
    };

    inline constexpr double arrangement_tolerance = 1e-12; // meters

    DipoleArrangement classify_arrangement(double dy, double dz);

    cdouble self_impedance(const DipoleConfig &cfg, const SystemConfig &sys);

    cdouble mutual_impedance(const DipoleConfig &cfg, const SystemConfig &sys, double dy, double dz);

    // Closed form for parallel half-wave dipoles with lateral separation d > 0
    // (or d = 0 without overlap) and axial offset h; all three arrangements
    // reduce to it. Exposed for cross-checks.
    cdouble parallel_dipole_impedance(const SystemConfig &sys, double d, double h);

    // Symmetric Z with Z_ii = self impedance
    CMatrix build_impedance_matrix(const DipoleConfig &cfg, const SystemConfig &sys, const ArrayConfig &array);

    struct CouplingMatrix
    {
        CMatrix m;          // (Z + r_d I)^-1
        CMatrix sqrt;       // principal square root of m
        double condition;   // 1-norm condition estimate of Z + r_d I

        Eigen::Index dimension() const { return m.rows(); }
    };

    inline constexpr double coupling_condition_limit = 1e12;

    CouplingMatrix coupling_matrix(const CMatrix &z, double dissipation_resistance);

    // Same, with the square root of M supplied by the caller (e.g. a cache)
    CouplingMatrix coupling_matrix(const CMatrix &z, double dissipation_resistance,
                                   const std::function<CMatrix(const CMatrix &)> &sqrt_of);

    CouplingMatrix coupling_for_array(const DipoleConfig &cfg, const SystemConfig &sys, const ArrayConfig &array);

    // Uncoupled array of the same size: M = I
    CouplingMatrix identity_coupling(Eigen::Index n);

    enum class CouplingForm
    {
        Congruence, // M^1/2 R (M^1/2)^H
        Literal     // M^1/2 R M^1/2, eigenvalues clipped at zero
    };

    // Coupled correlation, trace renormalized to the array size
    CorrelationMatrix coupled_correlation(const CorrelationMatrix &r, const CouplingMatrix &m,
                                          CouplingForm form = CouplingForm::Congruence);

    // M_rx^1/2 H M_tx^1/2
    CMatrix apply_coupling_to_channel(const CMatrix &h, const CouplingMatrix &m_rx, const CouplingMatrix &m_tx);

    // alpha M^1/2 with alpha chosen so that the transformed correlation
    // alpha^2 M^1/2 R (M^1/2)^H has trace equal to the array size
    CMatrix normalized_coupling_transform(const CouplingMatrix &m, const CMatrix &r);
}

#endif
