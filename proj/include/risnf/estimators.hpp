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

#ifndef RISNF_ESTIMATORS_HPP
#define RISNF_ESTIMATORS_HPP

#include <string_view>

#include "risnf/correlation.hpp"
#include "risnf/spectral.hpp"
#include "risnf/training.hpp"
#include "risnf/types.hpp"

namespace risnf
{
    enum class EstimatorVariant
    {
        LS,
        MMSE,
        RSLS
    };

    std::string_view estimator_name(EstimatorVariant v) noexcept;

    // scale * ris_block kron I_{identity_dim}
    struct ErrorCovarianceFactored
    {
        CMatrix ris_block;
        double scale = 1.0;
        Eigen::Index identity_dim = 1;

        double trace() const;
        CMatrix materialize() const;
    };

    struct NmseResult
    {
        double linear = 0.0;
        double db = 0.0;
    };

    NmseResult make_nmse(double linear);

    // error_trace / tr(R_cc)
    NmseResult nmse(double error_trace, const FactoredCovariance &r);

    // (1/sqrt(p_t)) (Q^H Q)^-1 Q^H y using the factored Gram
    CVector ls_estimate(const CVector &adjoint_y, const FactoredGram &g, double pilot_power);

    // scale 1/(gamma N), block (Phi^H Phi)^-1
    ErrorCovarianceFactored ls_error_covariance(const PhaseSchedule &phi, double snr, std::size_t ue_antennas,
                                                std::size_t bs_antennas);

    // Bayesian estimator sqrt(p_t) R Q^H (p_t Q R Q^H + sigma^2 I)^-1 y.
    // Works in the Kronecker eigenbasis of R when the Gram is a scaled
    // identity; otherwise materializes up to K N M = 512.
    class MmseEstimator
    {
    public:
        MmseEstimator(const FactoredCovariance &r, const FactoredGram &g, const TrainingDesign &design);

        CVector estimate(const CVector &adjoint_y) const;
        bool uses_fast_path() const { return dense_.size() == 0; }

    private:
        EigenSystem ris_, ue_, bs_;
        CVector weights_; // per Kronecker eigenvalue, fast path
        CMatrix dense_;   // full weight matrix, fallback path
    };

    CVector mmse_estimate(const CVector &adjoint_y, const TrainingDesign &design, const FactoredCovariance &r,
                          const FactoredGram &g);

    // Error eigenvalues d / (1 + gamma c d) for Gram c I, or the dense
    // (I + gamma R G)^-1 R trace otherwise (K N M <= 512)
    struct MmseErrorSpectrum
    {
        RVector eigenvalues; // empty on the dense path
        double trace = 0.0;
    };

    MmseErrorSpectrum mmse_error_covariance(const FactoredCovariance &r, const FactoredGram &g, double snr);

    // (1/sqrt(p_t)) U1 (U1^H Q^H Q U1)^-1 U1^H Q^H y with U1 = U_RIS kron U_UE kron U_BS
    class RslsEstimator
    {
    public:
        RslsEstimator(const SubspaceBasis &ris, const SubspaceBasis &ue, const SubspaceBasis &bs, const FactoredGram &g,
                      double pilot_power);

        CVector estimate(const CVector &adjoint_y) const;

    private:
        CMatrix ris_operator_; // U (U^H G U)^-1 U^H
        CMatrix ue_projector_;
        CMatrix bs_projector_;
        double inv_sqrt_power_;
    };

    CVector rsls_estimate(const CVector &adjoint_y, const FactoredGram &g, const SubspaceBasis &ris,
                          const SubspaceBasis &ue, const SubspaceBasis &bs, double pilot_power);

    // Noise-only covariance with the RIS-side reduction:
    // scale 1/(gamma N), block U (U^H Phi^H Phi U)^-1 U^H
    ErrorCovarianceFactored rsls_error_covariance(const SubspaceBasis &ris, const PhaseSchedule &phi, double snr,
                                                  std::size_t ue_antennas, std::size_t bs_antennas);

    // Full expected squared error of the RS-LS estimator when the channel
    // follows r: bias from energy outside the three subspaces plus noise
    double rsls_expected_error_trace(const SubspaceBasis &ris, const SubspaceBasis &ue, const SubspaceBasis &bs,
                                     const FactoredGram &g, const FactoredCovariance &r, double snr);
}

#endif
