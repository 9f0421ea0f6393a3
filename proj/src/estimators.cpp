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

#include <cmath>
#include <string>

#include "risnf/errors.hpp"
#include "risnf/estimators.hpp"

namespace risnf
{
    namespace
    {
        constexpr double inverse_rcond_limit = 1e-12;

        CMatrix checked_inverse(const CMatrix &a, ErrorKind kind, const char *what)
        {
            const Eigen::PartialPivLU<CMatrix> lu(a);
            const double rcond = lu.rcond();
            if (!(rcond >= inverse_rcond_limit))
                fail(kind, std::string(what) + " is singular (reciprocal condition " + std::to_string(rcond) + ")");
            return lu.inverse();
        }

        CMatrix projector(const SubspaceBasis &u) { return u.basis * u.basis.adjoint(); }

        // tr(A B) without forming the product
        cdouble trace_product(const CMatrix &a, const CMatrix &r) { return a.cwiseProduct(r.transpose()).sum(); }
    }

    std::string_view estimator_name(EstimatorVariant v) noexcept
    {
        switch (v)
        {
        case EstimatorVariant::LS:
            return "LS";
        case EstimatorVariant::MMSE:
            return "MMSE";
        case EstimatorVariant::RSLS:
            return "RS-LS";
        }
        return "?";
    }

    double ErrorCovarianceFactored::trace() const
    {
        return scale * ris_block.trace().real() * static_cast<double>(identity_dim);
    }

    CMatrix ErrorCovarianceFactored::materialize() const
    {
        require(ris_block.rows() * identity_dim <= 4096, "refusing to materialize a large error covariance");
        return scale * kron(ris_block, CMatrix::Identity(identity_dim, identity_dim));
    }

    NmseResult make_nmse(double linear)
    {
        return {linear, linear > 0.0 ? linear_to_db(linear) : -300.0};
    }

    NmseResult nmse(double error_trace, const FactoredCovariance &r)
    {
        const double t = r.trace();
        if (!(t > 0.0))
            fail(ErrorKind::InvalidArgument, "covariance trace must be positive");
        return make_nmse(error_trace / t);
    }

    CVector ls_estimate(const CVector &adjoint_y, const FactoredGram &g, double pilot_power)
    {
        require(pilot_power > 0.0, "pilot power must be positive");
        const Eigen::Index k = g.ris.rows();
        require(adjoint_y.size() == k * g.identity_dim, "adjoint vector length does not match the Gram");
        const CMatrix inv = checked_inverse(g.ris, ErrorKind::UnderdeterminedDesign, "training Gram");
        return apply_kron3(KronOperand::dense(inv), KronOperand::identity(g.identity_dim), KronOperand::identity(1),
                           adjoint_y) /
               std::sqrt(pilot_power);
    }

    ErrorCovarianceFactored ls_error_covariance(const PhaseSchedule &phi, double snr, std::size_t n, std::size_t m)
    {
        require(snr > 0.0, "SNR must be positive");
        const CMatrix pp = phi.phi.adjoint() * phi.phi;
        ErrorCovarianceFactored out;
        out.ris_block = hermitian_part(checked_inverse(pp, ErrorKind::UnderdeterminedDesign, "Phi^H Phi"));
        out.scale = 1.0 / (snr * static_cast<double>(n));
        out.identity_dim = static_cast<Eigen::Index>(n * m);
        return out;
    }

    MmseEstimator::MmseEstimator(const FactoredCovariance &r, const FactoredGram &g, const TrainingDesign &design)
    {
        require(r.ris.rows() == g.ris.rows() && r.ue.rows() * r.bs.rows() == g.identity_dim,
                "covariance and Gram dimensions differ");
        require(design.pilot_power > 0.0 && design.noise_variance > 0.0, "invalid training design");
        const double p = design.pilot_power;
        const double s2 = design.noise_variance;
        const double c = g.scaled_identity();
        if (c > 0.0)
        {
            ris_ = hermitian_eig(r.ris);
            ue_ = hermitian_eig(r.ue);
            bs_ = hermitian_eig(r.bs);
            const RVector d = kron_eigs({ris_.values, ue_.values, bs_.values});
            weights_.resize(d.size());
            for (Eigen::Index i = 0; i < d.size(); ++i)
            {
                const double di = std::max(d(i), 0.0);
                weights_(i) = std::sqrt(p) * di / (p * c * di + s2);
            }
            return;
        }
        const Eigen::Index dim = r.dimension();
        if (dim > dense_fallback_limit)
            fail(ErrorKind::UnsupportedFastPath, "MMSE with a non-scalar Gram is limited to K N M <= " +
                                                     std::to_string(dense_fallback_limit));
        const CMatrix rr = r.materialize();
        const CMatrix gg = kron(g.ris, CMatrix::Identity(g.identity_dim, g.identity_dim));
        const CMatrix a = p * rr * gg + s2 * CMatrix::Identity(dim, dim);
        dense_ = std::sqrt(p) * a.partialPivLu().solve(rr);
    }

    CVector MmseEstimator::estimate(const CVector &adjoint_y) const
    {
        if (!uses_fast_path())
        {
            require(adjoint_y.size() == dense_.cols(), "adjoint vector length does not match the covariance");
            return dense_ * adjoint_y;
        }
        require(adjoint_y.size() == weights_.size(), "adjoint vector length does not match the covariance");
        const CMatrix ris_h = ris_.vectors.adjoint();
        const CMatrix ue_h = ue_.vectors.adjoint();
        const CMatrix bs_h = bs_.vectors.adjoint();
        CVector z = apply_kron3(KronOperand::dense(ris_h), KronOperand::dense(ue_h), KronOperand::dense(bs_h), adjoint_y);
        z = z.cwiseProduct(weights_);
        return apply_kron3(KronOperand::dense(ris_.vectors), KronOperand::dense(ue_.vectors),
                           KronOperand::dense(bs_.vectors), z);
    }

    CVector mmse_estimate(const CVector &adjoint_y, const TrainingDesign &design, const FactoredCovariance &r,
                          const FactoredGram &g)
    {
        return MmseEstimator(r, g, design).estimate(adjoint_y);
    }

    MmseErrorSpectrum mmse_error_covariance(const FactoredCovariance &r, const FactoredGram &g, double snr)
    {
        require(snr >= 0.0, "SNR must be non-negative");
        require(r.ris.rows() == g.ris.rows() && r.ue.rows() * r.bs.rows() == g.identity_dim,
                "covariance and Gram dimensions differ");
        MmseErrorSpectrum out;
        const double c = g.scaled_identity();
        if (c > 0.0)
        {
            const RVector d = r.eigenvalues();
            out.eigenvalues.resize(d.size());
            for (Eigen::Index i = 0; i < d.size(); ++i)
            {
                const double di = std::max(d(i), 0.0);
                out.eigenvalues(i) = di / (1.0 + snr * c * di);
            }
            out.trace = out.eigenvalues.sum();
            return out;
        }
        const Eigen::Index dim = r.dimension();
        if (dim > dense_fallback_limit)
            fail(ErrorKind::UnsupportedFastPath, "MMSE error covariance with a non-scalar Gram is limited to K N M <= " +
                                                     std::to_string(dense_fallback_limit));
        const CMatrix rr = r.materialize();
        const CMatrix gg = kron(g.ris, CMatrix::Identity(g.identity_dim, g.identity_dim));
        const CMatrix e = (CMatrix::Identity(dim, dim) + snr * rr * gg).partialPivLu().solve(rr);
        out.trace = e.trace().real();
        return out;
    }

    RslsEstimator::RslsEstimator(const SubspaceBasis &ris, const SubspaceBasis &ue, const SubspaceBasis &bs,
                                 const FactoredGram &g, double pilot_power)
    {
        require(pilot_power > 0.0, "pilot power must be positive");
        require(ris.basis.rows() == g.ris.rows(), "RIS basis does not match the Gram");
        require(static_cast<Eigen::Index>(ue.dimension() * bs.dimension()) == g.identity_dim,
                "UE/BS bases do not match the Gram");
        const CMatrix reduced = ris.basis.adjoint() * g.ris * ris.basis;
        const CMatrix inv = checked_inverse(reduced, ErrorKind::SubspaceDesignMismatch, "reduced Gram");
        ris_operator_ = ris.basis * inv * ris.basis.adjoint();
        ue_projector_ = projector(ue);
        bs_projector_ = projector(bs);
        inv_sqrt_power_ = 1.0 / std::sqrt(pilot_power);
    }

    CVector RslsEstimator::estimate(const CVector &adjoint_y) const
    {
        return inv_sqrt_power_ * apply_kron3(KronOperand::dense(ris_operator_), KronOperand::dense(ue_projector_),
                                             KronOperand::dense(bs_projector_), adjoint_y);
    }

    CVector rsls_estimate(const CVector &adjoint_y, const FactoredGram &g, const SubspaceBasis &ris,
                          const SubspaceBasis &ue, const SubspaceBasis &bs, double pilot_power)
    {
        return RslsEstimator(ris, ue, bs, g, pilot_power).estimate(adjoint_y);
    }

    ErrorCovarianceFactored rsls_error_covariance(const SubspaceBasis &ris, const PhaseSchedule &phi, double snr,
                                                  std::size_t n, std::size_t m)
    {
        require(snr > 0.0, "SNR must be positive");
        require(ris.basis.rows() == phi.ris_elements(), "RIS basis does not match the schedule");
        const CMatrix pp = phi.phi.adjoint() * phi.phi;
        const CMatrix reduced = ris.basis.adjoint() * pp * ris.basis;
        const CMatrix inv = checked_inverse(reduced, ErrorKind::SubspaceDesignMismatch, "reduced Gram");
        ErrorCovarianceFactored out;
        out.ris_block = hermitian_part(ris.basis * inv * ris.basis.adjoint());
        out.scale = 1.0 / (snr * static_cast<double>(n));
        out.identity_dim = static_cast<Eigen::Index>(n * m);
        return out;
    }

    double rsls_expected_error_trace(const SubspaceBasis &ris, const SubspaceBasis &ue, const SubspaceBasis &bs,
                                     const FactoredGram &g, const FactoredCovariance &r, double snr)
    {
        require(snr > 0.0, "SNR must be positive");
        require(ris.basis.rows() == r.ris.rows() && static_cast<Eigen::Index>(ue.dimension()) == r.ue.rows() &&
                    static_cast<Eigen::Index>(bs.dimension()) == r.bs.rows(),
                "subspace bases do not match the covariance");
        const CMatrix reduced = ris.basis.adjoint() * g.ris * ris.basis;
        const CMatrix inv = checked_inverse(reduced, ErrorKind::SubspaceDesignMismatch, "reduced Gram");
        const CMatrix b_ris = ris.basis * inv * ris.basis.adjoint();
        const CMatrix t_ris = b_ris * g.ris; // RIS factor of B Q^H Q

        // Error = (I - T) c - noise, T = T_ris kron P_UE kron P_BS
        const double tr_r = r.trace();
        const double ue_cap = trace_product(projector(ue), r.ue).real();
        const double bs_cap = trace_product(projector(bs), r.bs).real();
        const double cross = trace_product(t_ris, r.ris).real() * ue_cap * bs_cap;
        const double quad = trace_product(t_ris * r.ris, t_ris.adjoint()).real() * ue_cap * bs_cap;
        const double bias = tr_r - 2.0 * cross + quad;
        const double noise = b_ris.trace().real() * static_cast<double>(ue.rank() * bs.rank()) / snr;
        return std::max(bias, 0.0) + noise;
    }
}
